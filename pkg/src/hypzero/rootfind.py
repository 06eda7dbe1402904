"""Zero computation for monic polynomials, with separation certification.

Zeros are eigenvalues of the companion matrix, individually polished by a
few Newton steps on the monic polynomial.  All downstream interaction sums
require pairwise-distinct zeros, so each zero set records its minimal
pairwise separation and a residual certificate.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .core import eval_monic, eval_monic_derivative
from .errors import ClusterWarning

# Default clustering floor, scaled by the zero magnitudes: below this the
# inverse-separation powers in the interaction sums amplify noise too much.
SEPARATION_FLOOR_SCALE = 1e-6
# Polish certificate threshold, scaled by (1 + max|zeta|)^N.
POLISH_SCALE = 1e-10
MAX_NEWTON_STEPS = 10
# Coincident zeros of multiplicity k scatter the eigensolver output on a
# circle of radius ~eps^(1/k), which can clear any separation floor while
# each point still nulls the polynomial.  Reconstructing the coefficients
# from the zeros exposes this reliably, so a reconstruction error above
# this threshold also flags clustering.
CLUSTER_COEFF_TOL = 1e-9


def default_separation_floor(max_modulus: float) -> float:
    return SEPARATION_FLOOR_SCALE * (1.0 + max_modulus)


@dataclass(frozen=True)
class ZeroSet:
    """N zeros in a fixed order (ascending by real part, then imaginary).

    ``min_separation`` is +inf for N = 1; ``polished`` records whether the
    residual certificate max_n |psi(zeta_n)| <= 1e-10 (1+max|zeta|)^N holds.
    """

    zeros: np.ndarray
    min_separation: float
    max_modulus: float
    residual_norm: float
    polished: bool = True

    @property
    def n(self) -> int:
        return len(self.zeros)

    def to_json_dict(self) -> dict:
        return {
            "zeros": [[z.real, z.imag] for z in self.zeros],
            "min_separation": self.min_separation if math.isfinite(self.min_separation) else None,
            "residual_norm": self.residual_norm,
        }


def _sorted_zeros(zeros: np.ndarray) -> np.ndarray:
    order = np.lexsort((zeros.imag, zeros.real))
    return zeros[order]


def _separation(zeros: np.ndarray) -> float:
    n = len(zeros)
    if n < 2:
        return math.inf
    diff = np.abs(zeros[:, None] - zeros[None, :])
    return float(np.min(diff[~np.eye(n, dtype=bool)]))


def zeroset_from_zeros(zeros, residual_norm: float = 0.0) -> ZeroSet:
    """Wrap explicitly given zeros (assumed exact) with their metadata."""
    z = _sorted_zeros(np.asarray(zeros, dtype=complex))
    if not np.all(np.isfinite(z)):
        raise ValueError("zeros must be finite")
    return ZeroSet(
        zeros=z,
        min_separation=_separation(z),
        max_modulus=float(np.max(np.abs(z))) if len(z) else 0.0,
        residual_norm=float(residual_norm),
        polished=True,
    )


def companion_matrix(gammas) -> np.ndarray:
    """Companion matrix of the monic polynomial sum_m gamma_m z^(N-m).

    Subdiagonal ones; last column -gamma_N .. -gamma_1.  Balancing happens
    inside the LAPACK eigensolver.
    """
    gammas = np.asarray(gammas, dtype=complex)
    if gammas[0] != 1.0:
        raise ValueError("companion form requires a monic polynomial (gamma_0 = 1)")
    n = len(gammas) - 1
    if n < 1:
        raise ValueError("degree must be at least 1")
    mat = np.zeros((n, n), dtype=complex)
    mat[1:, :-1] = np.eye(n - 1, dtype=complex)
    mat[:, -1] = -gammas[:0:-1]
    return mat


def _newton_polish(gammas, z0: complex, max_steps: int) -> complex:
    """Newton steps tracked by |psi|, in extended precision where available.

    On x86 ``np.clongdouble`` carries a 64-bit mantissa, which pushes the
    zero error well below double rounding; elsewhere it silently equals
    complex128 and the polish still converges to the double-precision
    noise floor.
    """
    g = np.asarray(gammas, dtype=np.clongdouble)
    n = len(g) - 1

    def val(z):
        acc = g[0]
        for c in g[1:]:
            acc = acc * z + c
        return acc

    def deriv(z):
        acc = g[0] * n
        for m in range(1, n):
            acc = acc * z + g[m] * (n - m)
        return acc

    z = np.clongdouble(z0)
    best, best_abs = z, abs(val(z))
    for _ in range(max_steps):
        d = deriv(z)
        if d == 0:
            break
        z = z - val(z) / d
        v = abs(val(z))
        if v < best_abs:
            best, best_abs = z, v
        else:
            break
    return complex(best)


def find_zeros(gammas, *, separation_floor: float | None = None,
               max_newton: int = MAX_NEWTON_STEPS) -> ZeroSet:
    """All N zeros of the monic polynomial, polished and deterministically ordered.

    Emits a (non-fatal) :class:`ClusterWarning` when the minimal pairwise
    separation drops below the floor; such sets are flagged for downstream
    consumers but still returned.
    """
    gammas = np.asarray(gammas, dtype=complex)
    raw = np.linalg.eigvals(companion_matrix(gammas))
    polished = np.array([_newton_polish(gammas, z, max_newton) for z in raw])
    zeros = _sorted_zeros(polished)

    max_modulus = float(np.max(np.abs(zeros)))
    residual = float(np.max(np.abs(eval_monic(gammas, zeros))))
    min_sep = _separation(zeros)
    floor = separation_floor if separation_floor is not None \
        else default_separation_floor(max_modulus)
    recon = vieta_coefficients(zeros)
    coeff_err = float(np.max(np.abs(recon - gammas) / np.maximum(1.0, np.abs(gammas))))
    if min_sep < floor:
        warnings.warn(
            f"zero separation {min_sep:.3e} below floor {floor:.3e}; "
            "interaction sums will be unreliable",
            ClusterWarning,
            stacklevel=2,
        )
    elif coeff_err > CLUSTER_COEFF_TOL:
        warnings.warn(
            f"coefficient reconstruction error {coeff_err:.3e} indicates "
            "coincident zeros; interaction sums will be unreliable",
            ClusterWarning,
            stacklevel=2,
        )
    n = len(zeros)
    certificate = POLISH_SCALE * (1.0 + max_modulus) ** n
    return ZeroSet(
        zeros=zeros,
        min_separation=min_sep,
        max_modulus=max_modulus,
        residual_norm=residual,
        polished=residual <= certificate,
    )


def vieta_coefficients(zeros) -> np.ndarray:
    """Monic coefficients gamma_0..gamma_N reconstructed from the zeros."""
    coeffs = np.array([1.0 + 0.0j])
    for z in zeros:
        nxt = np.zeros(len(coeffs) + 1, dtype=complex)
        nxt[:-1] += coeffs
        nxt[1:] -= complex(z) * coeffs
        coeffs = nxt
    return coeffs


class ZeroSetCheck(NamedTuple):
    max_residual: float
    coeff_error: float


def verify_zeroset(gammas, zs: ZeroSet) -> ZeroSetCheck:
    """Certificate for a zero set: max |psi(zeta_n)| plus the relative error
    of the coefficients reconstructed from the zeros."""
    gammas = np.asarray(gammas, dtype=complex)
    max_residual = float(np.max(np.abs(eval_monic(gammas, zs.zeros))))
    recon = vieta_coefficients(zs.zeros)
    scale = np.maximum(1.0, np.abs(gammas))
    coeff_error = float(np.max(np.abs(recon - gammas) / scale))
    return ZeroSetCheck(max_residual=max_residual, coeff_error=coeff_error)
