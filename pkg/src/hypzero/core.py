"""Parameter handling and monic coefficient construction.

A polynomial family is fixed by a degree N, p upper parameters alpha_j and
q lower parameters beta_k.  The degree-N monic polynomial

    psi(z) = sum_{m=0}^{N} gamma_m z^(N-m),    gamma_0 = 1,

has coefficients gamma_m built from rising factorials of the parameters.
Two independent construction routes are provided (a closed product formula
and a two-term recursion) together with the auxiliary expansions a_j, b_k
of the parameter polynomials prod(alpha_j - x) and x*prod(beta_k - 1 - x).
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateBeta, MapSingularity, PairMismatch

# Exclusion zone around beta values that null a Pochhammer denominator.
BETA_GUARD_TOL = 1e-9
# Pole guard for the rational change of variables z <-> x.
MAP_TOL = 1e-12
# Matching tolerance for cancelling alpha/beta tail pairs.
PAIR_TOL = 1e-12


def _as_complex_tuple(values, label: str) -> tuple[complex, ...]:
    out = []
    for v in values:
        c = complex(v)
        if not (math.isfinite(c.real) and math.isfinite(c.imag)):
            raise ValueError(f"{label} entries must be finite, got {c!r}")
        out.append(c)
    return tuple(out)


def _near_nonpositive_integer(b: complex, n_max: int, tol: float) -> bool:
    # True when b is within tol of one of {0, -1, ..., -n_max}.
    k = round(b.real)
    return -n_max <= k <= 0 and abs(b - k) < tol


@dataclass(frozen=True)
class ParameterSet:
    """One polynomial family: degree N plus the alpha and beta parameter lists.

    Values are immutable after construction; betas within ``BETA_GUARD_TOL``
    of a nonpositive integer of modulus < N+1 are rejected because they null
    a Pochhammer denominator in the coefficient formula.
    """

    N: int
    alphas: tuple[complex, ...] = ()
    betas: tuple[complex, ...] = ()

    def __post_init__(self):
        if not isinstance(self.N, int) or self.N < 1:
            raise ValueError(f"N must be a positive integer, got {self.N!r}")
        object.__setattr__(self, "alphas", _as_complex_tuple(self.alphas, "alphas"))
        object.__setattr__(self, "betas", _as_complex_tuple(self.betas, "betas"))
        for b in self.betas:
            if _near_nonpositive_integer(b, self.N, BETA_GUARD_TOL):
                raise DegenerateBeta(
                    f"beta={b} is within {BETA_GUARD_TOL} of a nonpositive "
                    f"integer in [-{self.N}, 0]; coefficients would degenerate"
                )

    @property
    def p(self) -> int:
        return len(self.alphas)

    @property
    def q(self) -> int:
        return len(self.betas)

    def to_json_dict(self) -> dict:
        return {
            "N": self.N,
            "alphas": [[a.real, a.imag] for a in self.alphas],
            "betas": [[b.real, b.imag] for b in self.betas],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)

    @classmethod
    def from_json_dict(cls, d: dict) -> "ParameterSet":
        return cls(
            N=int(d["N"]),
            alphas=tuple(complex(re, im) for re, im in d["alphas"]),
            betas=tuple(complex(re, im) for re, im in d["betas"]),
        )

    @classmethod
    def from_json(cls, s: str) -> "ParameterSet":
        return cls.from_json_dict(json.loads(s))


@dataclass(frozen=True)
class CoefficientBundle:
    """Monic coefficients gamma_0..gamma_N plus the a_j / b_k expansions.

    ``a_coeffs[j]`` is a_j for j = 0..p and ``b_coeffs[k-1]`` is b_k for
    k = 1..q+1.  Arrays are never mutated after construction.
    """

    gammas: np.ndarray
    a_coeffs: np.ndarray
    b_coeffs: np.ndarray

    @property
    def N(self) -> int:
        return len(self.gammas) - 1

    @property
    def p(self) -> int:
        return len(self.a_coeffs) - 1

    @property
    def q(self) -> int:
        return len(self.b_coeffs) - 1


def pochhammer(a: complex, j: int) -> complex:
    """Rising factorial (a)_j = a (a+1) ... (a+j-1), with (a)_0 = 1.

    Computed as a running product so nonpositive-integer arguments give an
    exact zero instead of a Gamma-function pole.
    """
    if j < 0:
        raise ValueError("pochhammer order must be nonnegative")
    out = complex(1.0)
    a = complex(a)
    for i in range(j):
        out *= a + i
    return out


def _check_beta_factors(betas, m_max: int) -> None:
    for b in betas:
        for i in range(m_max):
            if abs(b + i) < BETA_GUARD_TOL:
                raise DegenerateBeta(
                    f"Pochhammer factor beta+{i} vanishes for beta={b}"
                )


def gamma_closed(params: ParameterSet) -> np.ndarray:
    """Coefficients via the closed product formula

        gamma_m = (-N)_m prod_j (alpha_j)_m / (m! prod_k (beta_k)_m).
    """
    N = params.N
    _check_beta_factors(params.betas, N)
    out = np.empty(N + 1, dtype=complex)
    for m in range(N + 1):
        num = pochhammer(-N, m)
        for a in params.alphas:
            num *= pochhammer(a, m)
        den = complex(math.factorial(m))
        for b in params.betas:
            den *= pochhammer(b, m)
        out[m] = num / den
    return out


def gamma_recursive(params: ParameterSet) -> np.ndarray:
    """Coefficients via the two-term recursion

        (m+1) prod_k (beta_k + m) gamma_{m+1}
            = (m - N) prod_j (alpha_j + m) gamma_m,   gamma_0 = 1.

    The step at m = N is evaluated as well: its (m - N) factor must return
    an exact zero for gamma_{N+1}, which is asserted.
    """
    N = params.N
    _check_beta_factors(params.betas, N)
    out = np.empty(N + 1, dtype=complex)
    out[0] = 1.0
    for m in range(N):
        num = complex(m - N)
        for a in params.alphas:
            num *= a + m
        den = complex(m + 1)
        for b in params.betas:
            den *= b + m
        out[m + 1] = out[m] * num / den
    # closure of the recursion: the step at m = N must annihilate the tail
    tail = complex(N - N)
    for a in params.alphas:
        tail *= a + N
    assert tail * out[N] == 0.0
    return out


def _expand_linear_factors(roots) -> np.ndarray:
    """Coefficients (ascending powers of x) of prod_r (r - x).

    Incremental elementary-symmetric expansion: multiply in one linear
    factor at a time.  The empty product is [1].
    """
    coeffs = np.array([1.0 + 0.0j])
    for r in roots:
        nxt = np.zeros(len(coeffs) + 1, dtype=complex)
        nxt[: len(coeffs)] += complex(r) * coeffs
        nxt[1:] -= coeffs
        coeffs = nxt
    return coeffs


def alpha_coeffs(alphas) -> np.ndarray:
    """a_0..a_p with prod_{j=1}^{p} (alpha_j - x) = sum_j a_j x^j."""
    return _expand_linear_factors(alphas)


def beta_coeffs(betas) -> np.ndarray:
    """b_1..b_{q+1} with x prod_{k=1}^{q} (beta_k - 1 - x) = sum_k b_k x^k.

    The leading factor x only shifts indices, so entry [k-1] holds b_k.
    """
    return _expand_linear_factors([complex(b) - 1.0 for b in betas])


def ab_expand(params: ParameterSet) -> tuple[np.ndarray, np.ndarray]:
    """Both parameter-polynomial expansions for one family."""
    return alpha_coeffs(params.alphas), beta_coeffs(params.betas)


def coefficient_bundle(params: ParameterSet, *, cross_check: bool = False) -> CoefficientBundle:
    """Build gammas (recursion route by default) plus the a/b expansions.

    With ``cross_check=True`` the closed route is evaluated too and must
    agree entrywise to 1e-12 relative; used as a debugging guard.
    """
    gammas = gamma_recursive(params)
    if cross_check:
        alt = gamma_closed(params)
        scale = np.maximum(1.0, np.abs(alt))
        if np.max(np.abs(gammas - alt) / scale) >= 1e-12:
            raise AssertionError("coefficient routes disagree beyond 1e-12")
    a, b = ab_expand(params)
    return CoefficientBundle(gammas=gammas, a_coeffs=a, b_coeffs=b)


def eval_monic(gammas, z):
    """Horner evaluation of sum_m gamma_m z^(N-m); broadcasts over z."""
    acc = gammas[0] * np.ones_like(np.asarray(z, dtype=complex))
    for c in gammas[1:]:
        acc = acc * z + c
    if np.ndim(z) == 0:
        return complex(acc)
    return acc


def eval_monic_derivative(gammas, z):
    """Horner evaluation of the z-derivative of sum_m gamma_m z^(N-m)."""
    N = len(gammas) - 1
    if N == 0:
        return 0.0 * np.asarray(z, dtype=complex) if np.ndim(z) else 0j
    acc = gammas[0] * N * np.ones_like(np.asarray(z, dtype=complex))
    for m in range(1, N):
        acc = acc * z + gammas[m] * (N - m)
    if np.ndim(z) == 0:
        return complex(acc)
    return acc


def jacobi_to_hypergeometric(alpha: complex, beta: complex, N: int) -> ParameterSet:
    """The p=q=1 family whose zeros map onto Jacobi-polynomial zeros.

    The correspondence is beta_1 = alpha + 1, alpha_1 = N + alpha + beta + 1
    together with the change of variables x = 1 - 2/z.
    """
    return ParameterSet(N=N, alphas=(complex(N) + alpha + beta + 1.0,),
                        betas=(complex(alpha) + 1.0,))


def x_of_z(z: complex) -> complex:
    """x = 1 - 2/z; pole at z = 0."""
    if abs(z) < MAP_TOL:
        raise MapSingularity(f"x_of_z undefined at z={z}")
    return 1.0 - 2.0 / z


def z_of_x(x: complex) -> complex:
    """z = 2/(1 - x); pole at x = 1.  Inverse of :func:`x_of_z`."""
    if abs(1.0 - x) < MAP_TOL:
        raise MapSingularity(f"z_of_x undefined at x={x}")
    return 2.0 / (1.0 - x)


def cancel_pairs(params: ParameterSet, r: int) -> ParameterSet:
    """Drop r trailing alpha/beta pairs that match entrywise.

    A matching pair contributes identical rising factorials to numerator and
    denominator of every coefficient, so the reduced (p-r, q-r) family has
    the same polynomial and hence the same zeros.
    """
    if r < 0:
        raise ValueError("r must be nonnegative")
    if r == 0:
        return params
    if params.p - r < 1 or params.q - r < 1:
        raise ValueError(
            f"cancelling r={r} pairs needs p-r >= 1 and q-r >= 1 "
            f"(got p={params.p}, q={params.q})"
        )
    for i in range(1, r + 1):
        a, b = params.alphas[-i], params.betas[-i]
        if abs(a - b) > PAIR_TOL:
            raise PairMismatch(
                f"tail entries differ: alpha={a} vs beta={b} (position -{i})"
            )
    return ParameterSet(N=params.N, alphas=params.alphas[:-r], betas=params.betas[:-r])
