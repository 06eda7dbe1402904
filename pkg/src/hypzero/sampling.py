"""Deterministic parameter sampling for sweeps and scans.

The generator is SplitMix64: state advances by the golden-ratio increment
0x9E3779B97F4A7C15 and each output is the standard 64-bit finalizer of the
state (xor-shift/multiply with constants 0xBF58476D1CE4E5B9 and
0x94D049BB133111EB).  Streams are keyed by folding (seed, subkey...) through
the finalizer, so (seed, draw_index) pairs give independent, reproducible
draws on every platform.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import ParameterSet
from .errors import ClusterWarning, DegenerateBeta, SamplingExhausted

_MASK = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15


def _finalize(x: int) -> int:
    x &= _MASK
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK
    return x ^ (x >> 31)


class SplitMix64:
    """SplitMix64 stream keyed by a seed plus any number of subkeys."""

    def __init__(self, seed: int, *subkeys: int):
        state = seed & _MASK
        for k in subkeys:
            state = _finalize(state ^ ((k * _GAMMA) & _MASK))
        self._state = state

    def next_u64(self) -> int:
        self._state = (self._state + _GAMMA) & _MASK
        return _finalize(self._state)

    def uniform(self, lo: float = 0.0, hi: float = 1.0) -> float:
        # 53-bit mantissa: u in [0, 1)
        u = (self.next_u64() >> 11) * (1.0 / (1 << 53))
        return lo + (hi - lo) * u

    def integer(self, lo: int, hi: int) -> int:
        """Uniform integer in [lo, hi] inclusive (modulo bias negligible here)."""
        return lo + self.next_u64() % (hi - lo + 1)


@dataclass(frozen=True)
class SampleLimits:
    """Admissible box for random parameter draws.

    ``separation_floor_scale`` is the admissibility guard band around
    coincident zeros: draws whose zero sets separate by less than
    scale * (1 + max|zeta|) are rejected.  It is deliberately stricter than
    the clustering-warning floor, since the finite-difference oracle and the
    high-order pole formulas need workable separations, not merely nonzero
    ones.
    """

    n_min: int = 1
    n_max: int = 12
    p_max: int = 3
    q_max: int = 3
    param_min: float = 0.5
    param_max: float = 3.0
    integer_betas: bool = False
    integer_beta_choices: tuple[int, ...] = (2, 3, 4)
    separation_floor_scale: float = 1e-2
    max_attempts: int = 100


def sample_params(seed: int, draw_index: int, limits: SampleLimits = SampleLimits()) -> ParameterSet:
    """Deterministic admissible ParameterSet keyed by (seed, draw_index).

    Draws violating the beta guard band or whose zeros fall below the
    separation floor are rejected and redrawn under an incremented subkey,
    up to ``limits.max_attempts``.
    """
    from .rootfind import find_zeros          # deferred: avoids import cycle
    from .core import gamma_recursive
    import warnings

    for attempt in range(limits.max_attempts):
        rng = SplitMix64(seed, draw_index, attempt)
        n = rng.integer(limits.n_min, limits.n_max)
        p = rng.integer(0, limits.p_max)
        q = rng.integer(0, limits.q_max)
        alphas = tuple(rng.uniform(limits.param_min, limits.param_max) for _ in range(p))
        if limits.integer_betas:
            betas = tuple(float(limits.integer_beta_choices[
                rng.integer(0, len(limits.integer_beta_choices) - 1)]) for _ in range(q))
        else:
            betas = tuple(rng.uniform(limits.param_min, limits.param_max) for _ in range(q))
        try:
            params = ParameterSet(N=n, alphas=alphas, betas=betas)
        except DegenerateBeta:
            continue
        with warnings.catch_warnings():
            warnings.simplefilter("error", ClusterWarning)
            try:
                zs = find_zeros(gamma_recursive(params))
            except ClusterWarning:
                continue
        if zs.min_separation < limits.separation_floor_scale * (1.0 + zs.max_modulus):
            continue
        return params
    raise SamplingExhausted(
        f"no admissible draw for seed={seed}, index={draw_index} "
        f"after {limits.max_attempts} attempts"
    )
