"""Interaction matrices built from the zeros and their closed-form spectra.

The central object is the N x N matrix

    L_nm = sum_{k=1}^{q+1} b_k df_n^(k)/dzeta_m - sum_{j=1}^{p} a_j dg_n^(j)/dzeta_m,

evaluated at the zeros of the family's polynomial.  Its eigenvalues are

    lambda_m = m prod_{k=1}^{q} (beta_k - 1 + m),    m = 1..N,

independent of every alpha parameter (isospectrality) and integer whenever
the betas are integers.  L is simultaneously the Jacobian of the algebraic
zero-system residual, which a central-difference oracle verifies.  The
coefficient flow behind these facts is governed by a lower-bidiagonal matrix
whose diagonal carries the same spectrum.

Specializations obtained through the change of variables x = 1 - 2/z give
three matrices in the Jacobi-polynomial zeros with spectra m(m+alpha),
m(m-1)(m+alpha) and (m-1)(m+alpha-1).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .core import (CoefficientBundle, ParameterSet, alpha_coeffs, beta_coeffs,
                   gamma_recursive, jacobi_to_hypergeometric)
from .errors import DegenerateZeros, NoConvergence
from .rootfind import ZeroSet, _separation, find_zeros
from .sampling import SplitMix64
from .zerofunc import fg_vectors, residual

MAX_EIG_SIZE = 64
INTEGER_INPUT_TOL = 1e-9


def expected_spectrum(params: ParameterSet) -> np.ndarray:
    """Closed-form eigenvalues lambda_m = m prod_k (beta_k - 1 + m), m = 1..N."""
    out = np.empty(params.N, dtype=complex)
    for m in range(1, params.N + 1):
        v = complex(m)
        for b in params.betas:
            v *= b - 1.0 + m
        out[m - 1] = v
    return out


def assemble_interaction_matrix(a_coeffs, b_coeffs, zs: ZeroSet) -> np.ndarray:
    """L from explicit a/b expansions (exact-derivative route).

    The a_0 term multiplies a constant vector and drops from the Jacobian,
    so the a-sum starts at j = 1.
    """
    a = np.asarray(a_coeffs, dtype=complex)
    b = np.asarray(b_coeffs, dtype=complex)
    p, q = len(a) - 1, len(b) - 1
    vecs = fg_vectors(zs, q + 1, p, jacobians=True)
    out = np.zeros((zs.n, zs.n), dtype=complex)
    for k in range(1, q + 2):
        out += b[k - 1] * vecs.f_jac[k]
    for j in range(1, p + 1):
        out -= a[j] * vecs.g_jac[j]
    return out


def build_L(params: ParameterSet, bundle: CoefficientBundle, zs: ZeroSet) -> np.ndarray:
    """The isospectral matrix of one family, evaluated at its zero set."""
    return assemble_interaction_matrix(bundle.a_coeffs, bundle.b_coeffs, zs)


def build_Lambda(params: ParameterSet) -> np.ndarray:
    """Lower-bidiagonal coefficient-flow matrix.

    Diagonal m prod_j (beta_j - 1 + m); subdiagonal (N+1-m) prod_j (alpha_j - 1 + m).
    Being triangular, its eigenvalues are the diagonal, read off exactly.
    """
    n = params.N
    out = np.zeros((n, n), dtype=complex)
    diag = expected_spectrum(params)
    for m in range(1, n + 1):
        out[m - 1, m - 1] = diag[m - 1]
        if m >= 2:
            v = complex(n + 1 - m)
            for a in params.alphas:
                v *= a - 1.0 + m
            out[m - 1, m - 2] = v
    return out


def _is_triangular(mat: np.ndarray) -> bool:
    return bool(np.all(mat[np.triu_indices_from(mat, 1)] == 0)
                or np.all(mat[np.tril_indices_from(mat, -1)] == 0))


def eigenvalues(mat: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    """All eigenvalues of a dense complex matrix.

    Triangular input short-circuits to the exact diagonal (in diagonal
    order).  Otherwise LAPACK (balanced Hessenberg + QR) solves the problem
    and every returned pair must satisfy ||M v - lambda v|| <= tol ||M||_F,
    else :class:`NoConvergence` carries the partial result.  Dense output is
    sorted by (real, imaginary).
    """
    mat = np.asarray(mat, dtype=complex)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ValueError("eigenvalue input must be a square matrix")
    if mat.shape[0] > MAX_EIG_SIZE:
        raise ValueError(f"matrix size {mat.shape[0]} exceeds supported {MAX_EIG_SIZE}")
    if not np.all(np.isfinite(mat)):
        raise ValueError("matrix entries must be finite")
    if _is_triangular(mat):
        return np.diag(mat).copy()
    try:
        vals, vecs = np.linalg.eig(mat)
    except np.linalg.LinAlgError as exc:
        raise NoConvergence(f"eigenvalue iteration failed: {exc}") from exc
    scale = np.linalg.norm(mat)
    if scale > 0:
        backward = np.linalg.norm(mat @ vecs - vecs * vals[None, :], axis=0)
        backward /= np.linalg.norm(vecs, axis=0) * scale
        if np.max(backward) > tol:
            raise NoConvergence(
                f"backward error {np.max(backward):.3e} exceeds {tol:.1e}",
                partial=vals,
            )
    order = np.lexsort((vals.imag, vals.real))
    return vals[order]


def pair_spectra(computed: np.ndarray, expected: np.ndarray) -> tuple[int, ...]:
    """Greedy matching: expected values in decreasing modulus each claim the
    nearest unclaimed computed eigenvalue.  Returns, for every expected index,
    the claimed computed index."""
    n = len(expected)
    if len(computed) != n:
        raise ValueError("spectra have different lengths")
    matching = [-1] * n
    free = list(range(n))
    for i in sorted(range(n), key=lambda i: -abs(expected[i])):
        j = min(free, key=lambda j: abs(computed[j] - expected[i]))
        matching[i] = j
        free.remove(j)
    return tuple(matching)


@dataclass(frozen=True)
class SpectrumReport:
    """Computed vs expected eigenvalues under the greedy pairing.

    Relative errors are |computed - expected| / max(1, |expected|), which
    stays meaningful for spectra containing exact zeros.
    """

    computed: np.ndarray
    expected: np.ndarray
    matching: tuple[int, ...]
    max_abs_error: float
    max_rel_error: float
    is_diophantine_input: bool
    integer_deviation: float | None

    def to_json_dict(self) -> dict:
        return {
            "computed": [[v.real, v.imag] for v in self.computed],
            "expected": [[v.real, v.imag] for v in self.expected],
            "pairing": list(self.matching),
            "max_abs_error": self.max_abs_error,
            "max_rel_error": self.max_rel_error,
            "integer_deviation": self.integer_deviation,
        }


def spectrum_report(computed, expected, *, diophantine_input: bool = False) -> SpectrumReport:
    computed = np.asarray(computed, dtype=complex)
    expected = np.asarray(expected, dtype=complex)
    matching = pair_spectra(computed, expected)
    paired = computed[list(matching)]
    abs_err = np.abs(paired - expected)
    rel_err = abs_err / np.maximum(1.0, np.abs(expected))
    integer_dev = None
    if diophantine_input:
        integer_dev = float(max(abs(v - round(v.real)) for v in computed))
    return SpectrumReport(
        computed=computed,
        expected=expected,
        matching=matching,
        max_abs_error=float(np.max(abs_err)),
        max_rel_error=float(np.max(rel_err)),
        is_diophantine_input=diophantine_input,
        integer_deviation=integer_dev,
    )


def _all_betas_integer(params: ParameterSet) -> bool:
    return all(abs(b.imag) < INTEGER_INPUT_TOL
               and abs(b.real - round(b.real)) < INTEGER_INPUT_TOL
               for b in params.betas)


def verify_spectrum(params: ParameterSet, bundle: CoefficientBundle, zs: ZeroSet) -> SpectrumReport:
    """Eigenvalues of L against the closed form, with Diophantine bookkeeping."""
    computed = eigenvalues(build_L(params, bundle, zs))
    return spectrum_report(computed, expected_spectrum(params),
                           diophantine_input=_all_betas_integer(params))


@dataclass(frozen=True)
class IsospectralityReport:
    """Spectra under alpha perturbations plus the beta-shift control arm."""

    alpha_max_rel_errors: tuple[float, ...]
    control_max_rel_error: float | None
    control_spectrum_changed: bool | None
    tol: float
    passed: bool


def _pipeline_spectrum(params: ParameterSet) -> np.ndarray:
    zs = find_zeros(gamma_recursive(params))
    a, b = alpha_coeffs(params.alphas), beta_coeffs(params.betas)
    return eigenvalues(assemble_interaction_matrix(a, b, zs))


def isospectrality_scan(params: ParameterSet, n_perturbations: int = 10,
                        magnitude: float = 0.5, seed: int = 0,
                        tol: float = 1e-6) -> IsospectralityReport:
    """Perturb each alpha by seeded complex offsets; the spectrum must stay
    on the closed form (which never involves the alphas).  A beta_1 -> beta_1 + 1
    control run must land on the correspondingly shifted closed form."""
    target = expected_spectrum(params)
    errs = []
    if params.p > 0:
        for t in range(n_perturbations):
            rng = SplitMix64(seed, t)
            shifted = tuple(
                a + magnitude * rng.uniform() * cmath.exp(2j * math.pi * rng.uniform())
                for a in params.alphas
            )
            perturbed = ParameterSet(N=params.N, alphas=shifted, betas=params.betas)
            computed = _pipeline_spectrum(perturbed)
            errs.append(spectrum_report(computed, target).max_rel_error)
    control_err = None
    control_changed = None
    if params.q > 0:
        shifted = ParameterSet(N=params.N, alphas=params.alphas,
                               betas=(params.betas[0] + 1.0,) + params.betas[1:])
        control_target = expected_spectrum(shifted)
        computed = _pipeline_spectrum(shifted)
        control_err = spectrum_report(computed, control_target).max_rel_error
        control_changed = bool(np.max(np.abs(np.sort_complex(control_target)
                                             - np.sort_complex(target))) > tol)
    passed = all(e < tol for e in errs) and (control_err is None or
                                             (control_err < tol and control_changed))
    return IsospectralityReport(
        alpha_max_rel_errors=tuple(errs),
        control_max_rel_error=control_err,
        control_spectrum_changed=control_changed,
        tol=tol,
        passed=passed,
    )


def fd_jacobian(params: ParameterSet, bundle: CoefficientBundle, zs: ZeroSet,
                h: float = 1e-6) -> np.ndarray:
    """Central-difference Jacobian of the zero-system residual.

    Independent oracle for :func:`build_L`; zero labels are pinned, so the
    perturbed configurations bypass the canonical re-sorting.
    """
    base = zs.zeros
    n = len(base)
    out = np.empty((n, n), dtype=complex)

    def residual_at(z: np.ndarray) -> np.ndarray:
        shifted = ZeroSet(
            zeros=z,
            min_separation=_separation(z),
            max_modulus=float(np.max(np.abs(z))),
            residual_norm=0.0,
        )
        return residual(params, bundle, shifted)

    for m in range(n):
        zp = base.copy()
        zm = base.copy()
        zp[m] += h
        zm[m] -= h
        out[:, m] = (residual_at(zp) - residual_at(zm)) / (2.0 * h)
    return out


def verify_stationary(params: ParameterSet, bundle: CoefficientBundle) -> float:
    """Stationarity of the coefficient flow at the monic coefficients.

    Returns max_m |m prod(beta_j - 1 + m) gamma_m
                   + (N+1-m) prod(alpha_j - 1 + m) gamma_{m-1}|,
    scaled by the magnitude of the participating terms.
    """
    g = bundle.gammas
    n = params.N
    worst = 0.0
    scale = 1.0
    for m in range(1, n + 1):
        t1 = complex(m)
        for b in params.betas:
            t1 *= b - 1.0 + m
        t1 *= g[m]
        t2 = complex(n + 1 - m)
        for a in params.alphas:
            t2 *= a - 1.0 + m
        t2 *= g[m - 1]
        worst = max(worst, abs(t1 + t2))
        scale = max(scale, abs(t1) + abs(t2))
    return worst / scale


def verify_reduced_case(alpha1: complex, beta1: complex, alpha2: complex,
                        N: int) -> SpectrumReport:
    """Extended (p=q=2) matrix with beta_2 = alpha_2 evaluated on the zeros
    of the plain (p=q=1) family.

    The cancelling pair leaves the zeros untouched while the matrix picks up
    the extra spectral factor: lambda_m = m (beta_1 - 1 + m)(alpha_2 - 1 + m),
    valid for arbitrary alpha_2 including 0.  The a/b expansions are formed
    from the raw parameter lists because beta_2 = alpha_2 may sit inside the
    beta guard band (e.g. alpha_2 = 0) without ever entering a coefficient
    denominator here.
    """
    base = ParameterSet(N=N, alphas=(complex(alpha1),), betas=(complex(beta1),))
    zs = find_zeros(gamma_recursive(base))
    a = alpha_coeffs([complex(alpha1), complex(alpha2)])
    b = beta_coeffs([complex(beta1), complex(alpha2)])
    computed = eigenvalues(assemble_interaction_matrix(a, b, zs))
    m = np.arange(1, N + 1, dtype=complex)
    expected = m * (complex(beta1) - 1.0 + m) * (complex(alpha2) - 1.0 + m)
    return spectrum_report(computed, expected)


# ---------------------------------------------------------------------------
# Jacobi-polynomial specializations (x = 1 - 2/z)

JACOBI_GUARD = 1e-9


def _check_real_nodes(xs) -> np.ndarray:
    x = np.asarray(xs, dtype=float)
    if x.ndim != 1 or len(x) < 1:
        raise ValueError("need a one-dimensional list of nodes")
    if len(x) > 1 and _separation(x.astype(complex)) < JACOBI_GUARD:
        raise DegenerateZeros("Jacobi nodes are not pairwise distinct")
    return x


def jacobi_zeros(alpha: float, beta: float, N: int) -> np.ndarray:
    """Jacobi-polynomial zeros through the hypergeometric pipeline.

    Zeros of the mapped p=q=1 family are computed and pushed through
    x = 1 - 2/z; for real alpha, beta > -1 they come out real in (-1, 1).
    """
    params = jacobi_to_hypergeometric(alpha, beta, N)
    zs = find_zeros(gamma_recursive(params))
    if np.min(np.abs(zs.zeros)) < 1e-12:
        raise DegenerateZeros("a mapped zero sits at the coordinate pole z=0")
    x = 1.0 - 2.0 / zs.zeros
    if np.max(np.abs(x.imag)) > 1e-9:
        raise DegenerateZeros("mapped nodes have non-negligible imaginary part")
    return np.sort(x.real)


def jacobi_sigma(xs, n: int, r: int, rho: int) -> float:
    """Interaction sum in the x variable:
    sum_{l != n} (2/(1-x_l))^(r-rho) ((1-x_n)/(x_n-x_l))^rho,
    i.e. sigma_n^(r,rho) of the mapped configuration z = 2/(1-x)."""
    x = _check_real_nodes(xs)
    if np.max(x) > 1.0 - JACOBI_GUARD:
        raise DegenerateZeros("node at the map pole x=1")
    xl = np.delete(x, n)
    return float(np.sum((2.0 / (1.0 - xl)) ** (r - rho)
                        * ((1.0 - x[n]) / (x[n] - xl)) ** rho))


def _jacobi_sigma_vec(x: np.ndarray, r: int, rho: int) -> np.ndarray:
    n = len(x)
    diff = x[:, None] - x[None, :]
    np.fill_diagonal(diff, 1.0)
    term = ((2.0 / (1.0 - x[None, :])) ** (r - rho)
            * ((1.0 - x[:, None]) / diff) ** rho)
    np.fill_diagonal(term, 0.0)
    return term.sum(axis=1)


def jacobi_L_small(xs, alpha: float) -> np.ndarray:
    """First Jacobi matrix; spectrum m (m + alpha), independent of beta."""
    x = _check_real_nodes(xs)
    diff = x[:, None] - x[None, :]
    np.fill_diagonal(diff, 1.0)
    out = -(1.0 + x[:, None]) * (1.0 - x[None, :]) ** 2 / diff ** 2
    diag_sums = ((1.0 + x[None, :]) * (1.0 - x[:, None]) ** 2 / diff ** 2)
    np.fill_diagonal(diag_sums, 0.0)
    np.fill_diagonal(out, alpha + 1.0 + diag_sums.sum(axis=1))
    return out.astype(complex)


def jacobi_L_big(xs, alpha: float, beta: float) -> np.ndarray:
    """Second Jacobi matrix; spectrum m (m - 1)(m + alpha), beta-independent."""
    x = _check_real_nodes(xs)
    if np.max(x) > 1.0 - JACOBI_GUARD:
        raise DegenerateZeros("node at the map pole x=1")
    s11 = _jacobi_sigma_vec(x, 1, 1)
    s22 = _jacobi_sigma_vec(x, 2, 2)
    s33 = _jacobi_sigma_vec(x, 3, 3)
    s12 = _jacobi_sigma_vec(x, 1, 2)
    s23 = _jacobi_sigma_vec(x, 2, 3)
    diff = x[:, None] - x[None, :]
    np.fill_diagonal(diff, 1.0)
    rat = (1.0 - x[None, :]) / diff
    out = (((alpha + beta + 1.0) * (1.0 - x[:, None]) + 2.0 * (1.0 - alpha)
            + 3.0 * (1.0 + x[:, None]) * s11[:, None]) * rat ** 2
           - 3.0 * (1.0 + x[:, None]) * rat ** 3)
    np.fill_diagonal(out, (7.0 + 2.0 * alpha) * s22 + 6.0 * s33
                     - 2.0 * (4.0 + alpha + beta) * s12 - 6.0 * s23
                     - 3.0 * s11 ** 2 - 6.0 * s11 * s22 + 6.0 * s11 * s12)
    return out.astype(complex)


def jacobi_G(xs) -> np.ndarray:
    """Companion construction from the same nodes; spectrum (m-1)(m+alpha-1).

    Similar in shape to :func:`jacobi_L_small` yet entrywise different.
    """
    x = _check_real_nodes(xs)
    diff = x[:, None] - x[None, :]
    np.fill_diagonal(diff, 1.0)
    out = -(1.0 - x[None, :]) ** 2 * (1.0 + x[None, :]) / diff ** 2
    diag_sums = (1.0 - x[None, :] ** 2) * (1.0 - x[:, None]) / diff ** 2
    np.fill_diagonal(diag_sums, 0.0)
    np.fill_diagonal(out, diag_sums.sum(axis=1))
    return out.astype(complex)


def jacobi_polynomial_value(alpha: float, beta: float, n: int, x: float) -> float:
    """Three-term-recurrence evaluation of the degree-n Jacobi polynomial.

    Used only as a residual sanity check on the mapped zeros.
    """
    if n == 0:
        return 1.0
    pm1 = 1.0
    p = (alpha + 1.0) + (alpha + beta + 2.0) * (x - 1.0) / 2.0
    for k in range(2, n + 1):
        c = 2.0 * k + alpha + beta
        a1 = 2.0 * k * (k + alpha + beta) * (c - 2.0)
        a2 = (c - 1.0) * (alpha ** 2 - beta ** 2)
        a3 = (c - 1.0) * c * (c - 2.0)
        a4 = 2.0 * (k + alpha - 1.0) * (k + beta - 1.0) * c
        p, pm1 = ((a2 + a3 * x) * p - a4 * pm1) / a1, p
    return p
