"""Interaction sums over the zeros and the universal f/g function towers.

Everything here is a function of a zero configuration alone, independent of
which polynomial produced it.  The building block is

    sigma_n^(r,rho) = sum_{l != n} zeta_l^r / (zeta_n - zeta_l)^rho,

from which the vectors f_n^(j), g_n^(j) and their derivative matrices are
assembled.  The f tower is defined by the recursion

    f_n^(1) = zeta_n,
    f_n^(j+1) = -f_n^(j) + sum_{l != n} [zeta_n f_l^(j) + zeta_l f_n^(j)]
                                        / (zeta_n - zeta_l),

and g_n^(0) = 1, g_n^(j) = sum_{l != n} [f_n^(j) + f_l^(j)]/(zeta_n - zeta_l).
Closed sigma-polynomial forms exist for small j and are cross-checked against
the recursion; derivative matrices come either from those closed forms or
from exact chain-rule differentiation of the recursion (any j).

Index convention: n, m are 0-based here; the degree-N family index m used in
spectrum formulas stays 1-based because it is a label, not an index.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import CoefficientBundle, ParameterSet
from .errors import CaseArityMismatch, DegenerateZeros
from .rootfind import ZeroSet, default_separation_floor


def _require_separated(zs: ZeroSet) -> np.ndarray:
    floor = default_separation_floor(zs.max_modulus)
    if not zs.min_separation > floor:
        raise DegenerateZeros(
            f"min separation {zs.min_separation:.3e} not above floor {floor:.3e}"
        )
    return zs.zeros


def _inv_diff(z: np.ndarray) -> np.ndarray:
    """Matrix D with D[n, l] = 1/(z_n - z_l) off-diagonal, 0 on the diagonal."""
    n = len(z)
    diff = z[:, None] - z[None, :]
    np.fill_diagonal(diff, 1.0)
    d = 1.0 / diff
    np.fill_diagonal(d, 0.0)
    return d


def sigma_vector(z: np.ndarray, r: int, rho: int) -> np.ndarray:
    """All N values sigma_n^(r,rho) at once."""
    if rho == 0:
        return np.full(len(z), np.sum(z ** r)) - z ** r
    d = _inv_diff(z)
    return (d ** rho) @ (z ** r)


def sigma(zs: ZeroSet, n: int, r: int, rho: int) -> complex:
    """sigma_n^(r,rho) for one 0-based index n."""
    z = _require_separated(zs)
    zl = np.delete(z, n)
    return complex(np.sum(zl ** r / (z[n] - zl) ** rho))


@dataclass(frozen=True)
class SigmaTable:
    """Immutable cache of sigma_n^(r,rho) for 0 <= r <= r_max, 0 <= rho <= rho_max."""

    zeros: np.ndarray
    values: np.ndarray  # shape (N, r_max+1, rho_max+1)

    def value(self, n: int, r: int, rho: int) -> complex:
        return complex(self.values[n, r, rho])

    @property
    def r_max(self) -> int:
        return self.values.shape[1] - 1

    @property
    def rho_max(self) -> int:
        return self.values.shape[2] - 1


def sigma_table(zs: ZeroSet, r_max: int, rho_max: int) -> SigmaTable:
    z = _require_separated(zs)
    vals = np.empty((len(z), r_max + 1, rho_max + 1), dtype=complex)
    for r in range(r_max + 1):
        for rho in range(rho_max + 1):
            vals[:, r, rho] = sigma_vector(z, r, rho)
    vals.setflags(write=False)
    return SigmaTable(zeros=z, values=vals)


def sigma_partial(zs: ZeroSet, n: int, m: int, r: int, rho: int) -> complex:
    """d sigma_n^(r,rho) / d zeta_m.

    Diagonal: -rho sigma_n^(r,rho+1).  Off-diagonal:
    [r zeta_n + (rho - r) zeta_m] zeta_m^(r-1) / (zeta_n - zeta_m)^(rho+1).
    """
    z = _require_separated(zs)
    if n == m:
        zl = np.delete(z, n)
        return complex(-rho * np.sum(zl ** r / (z[n] - zl) ** (rho + 1)))
    if r == 0:
        # the r=0 sum has constant numerators; only the pole depends on zeta_m
        return complex(rho / (z[n] - z[m]) ** (rho + 1))
    return complex((r * z[n] + (rho - r) * z[m]) * z[m] ** (r - 1)
                   / (z[n] - z[m]) ** (rho + 1))


def f_recursive(zs: ZeroSet, j_max: int) -> dict[int, np.ndarray]:
    """f vectors for j = 1..j_max via the defining recursion."""
    if j_max < 1:
        raise ValueError("j_max must be at least 1")
    z = _require_separated(zs)
    d = _inv_diff(z)
    dz = d @ z
    out = {1: z.copy()}
    for j in range(1, j_max):
        f = out[j]
        out[j + 1] = -f + z * (d @ f) + f * dz
    return out


def _sig(z, r, rho):
    return sigma_vector(z, r, rho)


def f_closed(zs: ZeroSet, j: int) -> np.ndarray:
    """Closed sigma-polynomial form of f^(j), available for j <= 4."""
    z = _require_separated(zs)
    if j == 1:
        return z.copy()
    s11 = _sig(z, 1, 1)
    if j == 2:
        return z * (-1.0 + 2.0 * s11)
    s22 = _sig(z, 2, 2)
    if j == 3:
        return z * (1.0 - 6.0 * s11 - 3.0 * s22 + 3.0 * s11 ** 2)
    if j == 4:
        s33 = _sig(z, 3, 3)
        return z * (-1.0 + 14.0 * s11 + 18.0 * s22 + 8.0 * s33
                    - 18.0 * s11 ** 2 - 12.0 * s11 * s22 + 4.0 * s11 ** 3)
    raise ValueError(f"no closed form for j={j} (have j <= 4)")


def g_from_f(zs: ZeroSet, f_j: np.ndarray | None = None) -> np.ndarray:
    """g vector from the matching f vector; with f_j=None returns g^(0) = 1."""
    if f_j is None:
        return np.ones(zs.n, dtype=complex)
    z = _require_separated(zs)
    d = _inv_diff(z)
    f_j = np.asarray(f_j, dtype=complex)
    return f_j * d.sum(axis=1) + d @ f_j


def g_closed(zs: ZeroSet, j: int) -> np.ndarray:
    """Closed sigma-polynomial form of g^(j), available for j <= 3.

    The j=3 coefficients are the generic-N ones, fixed against the defining
    recursion in exact arithmetic; a commonly quoted variant with
    (9/4)(N-7)-style coefficients is valid only for N <= 3, where a cubic
    dependency among the sigma products masks the difference.
    """
    z = _require_separated(zs)
    n_zeros = len(z)
    if j == 0:
        return np.ones(n_zeros, dtype=complex)
    s11 = _sig(z, 1, 1)
    if j == 1:
        return (n_zeros - 1) + 2.0 * s11
    s22 = _sig(z, 2, 2)
    if j == 2:
        return (1.0 - n_zeros) + 2.0 * (n_zeros - 3.0) * s11 - 3.0 * s22 + 3.0 * s11 ** 2
    if j == 3:
        s33 = _sig(z, 3, 3)
        return ((n_zeros - 1.0) - 2.0 * (3.0 * n_zeros - 7.0) * s11
                - 3.0 * (n_zeros - 6.0) * s22 + 8.0 * s33
                + 3.0 * (n_zeros - 6.0) * s11 ** 2
                - 12.0 * s11 * s22 + 4.0 * s11 ** 3)
    raise ValueError(f"no closed form for j={j} (have j <= 3)")


def _fg_jacobian_recursive(z: np.ndarray, j_max: int):
    """f vectors and their exact jacobians for j = 1..j_max.

    Chain-rule differentiation of the recursion, vectorized; every step is
    exact (no truncation), so this route covers arbitrary j.
    """
    n = len(z)
    d = _inv_diff(z)
    e = d * d
    dz = d @ z
    ez = e @ z
    fs = {1: z.copy()}
    jacs = {1: np.eye(n, dtype=complex)}
    for j in range(1, j_max):
        f, jac = fs[j], jacs[j]
        df = d @ f
        ef = e @ f
        nxt = -jac + z[:, None] * (d @ jac) + dz[:, None] * jac \
            + e * np.outer(z, f) + f[:, None] * d + e * np.outer(f, z)
        nxt[np.diag_indices(n)] += df - z * ef - f * ez
        fs[j + 1] = -f + z * df + f * dz
        jacs[j + 1] = nxt
    return fs, jacs


def _g_jacobian_from(z: np.ndarray, f: np.ndarray, jac: np.ndarray) -> np.ndarray:
    n = len(z)
    d = _inv_diff(z)
    e = d * d
    out = d.sum(axis=1)[:, None] * jac + d @ jac + e * (f[:, None] + f[None, :])
    out[np.diag_indices(n)] += -f * e.sum(axis=1) - e @ f
    return out


def _f_jacobian_closed(z: np.ndarray, j: int) -> np.ndarray:
    n = len(z)
    diff = z[:, None] - z[None, :]
    np.fill_diagonal(diff, 1.0)
    if j == 1:
        return np.eye(n, dtype=complex)
    s22 = _sig(z, 2, 2)
    if j == 2:
        out = 2.0 * (z[:, None] / diff) ** 2
        out[np.diag_indices(n)] = -(1.0 + 2.0 * s22)
        return out
    if j == 3:
        s11 = _sig(z, 1, 1)
        s33 = _sig(z, 3, 3)
        out = -6.0 * z[:, None] ** 2 * (z[:, None] - diff * s11[:, None]) / diff ** 3
        out[np.diag_indices(n)] = (1.0 + 9.0 * s22 + 6.0 * s33
                                   - 3.0 * s11 * (s11 + 2.0 * s22))
        return out
    raise ValueError(f"no closed form for j={j} (have j <= 3)")


def _g_jacobian_closed(z: np.ndarray, j: int) -> np.ndarray:
    n = len(z)
    diff = z[:, None] - z[None, :]
    np.fill_diagonal(diff, 1.0)
    s11 = _sig(z, 1, 1)
    s12 = _sig(z, 1, 2)
    if j == 1:
        out = 2.0 * z[:, None] / diff ** 2
        out[np.diag_indices(n)] = -2.0 * s12
        return out
    s22 = _sig(z, 2, 2)
    s23 = _sig(z, 2, 3)
    if j == 2:
        out = (2.0 * z[:, None] * ((n - 3.0) * z[:, None] - n * z[None, :]) / diff ** 3
               + 6.0 * z[:, None] * s11[:, None] / diff ** 2)
        out[np.diag_indices(n)] = -2.0 * (n - 3.0) * s12 + 6.0 * s23 - 6.0 * s11 * s12
        return out
    if j == 3:
        # derivative of the generic-N closed form of g^(3)
        s34 = _sig(z, 3, 4)
        out = z[:, None] * (
            24.0 * z[None, :] ** 2 / diff ** 4
            - 6.0 * z[None, :] * ((n - 6.0) + 4.0 * s11[:, None]) / diff ** 3
            + (-2.0 * (3.0 * n - 7.0) + 6.0 * (n - 6.0) * s11[:, None]
               - 12.0 * s22[:, None] + 12.0 * s11[:, None] ** 2) / diff ** 2
        )
        out[np.diag_indices(n)] = (2.0 * (3.0 * n - 7.0) * s12 + 6.0 * (n - 6.0) * s23
                                   - 24.0 * s34 - 6.0 * (n - 6.0) * s11 * s12
                                   + 12.0 * s12 * s22 + 24.0 * s11 * s23
                                   - 12.0 * s11 ** 2 * s12)
        return out
    raise ValueError(f"no closed form for j={j} (have j <= 3)")


def f_jacobian(zs: ZeroSet, j: int, method: str = "recursive") -> np.ndarray:
    """Matrix of partial derivatives d f_n^(j) / d zeta_m.

    ``method='recursive'`` (default) differentiates the recursion exactly and
    works for any j; ``method='closed'`` uses the sigma forms (j <= 3).
    """
    z = _require_separated(zs)
    if method == "closed":
        return _f_jacobian_closed(z, j)
    if method == "recursive":
        _, jacs = _fg_jacobian_recursive(z, j)
        return jacs[j]
    raise ValueError(f"unknown method {method!r}")


def g_jacobian(zs: ZeroSet, j: int, method: str = "recursive") -> np.ndarray:
    """Matrix of partial derivatives d g_n^(j) / d zeta_m."""
    z = _require_separated(zs)
    if method == "closed":
        return _g_jacobian_closed(z, j)
    if method == "recursive":
        fs, jacs = _fg_jacobian_recursive(z, j)
        return _g_jacobian_from(z, fs[j], jacs[j])
    raise ValueError(f"unknown method {method!r}")


@dataclass(frozen=True)
class FGVectors:
    """Bundle of f/g vectors (and optionally their jacobians) for one zero set."""

    f: dict[int, np.ndarray]
    g: dict[int, np.ndarray]
    f_jac: dict[int, np.ndarray] = field(default_factory=dict)
    g_jac: dict[int, np.ndarray] = field(default_factory=dict)


def fg_vectors(zs: ZeroSet, f_max: int, g_max: int, *, jacobians: bool = False) -> FGVectors:
    """f^(1..f_max), g^(0..g_max) and, on request, all their jacobians."""
    z = _require_separated(zs)
    top = max(f_max, g_max, 1)
    if jacobians:
        fs, fjacs = _fg_jacobian_recursive(z, top)
        gjacs = {j: _g_jacobian_from(z, fs[j], fjacs[j]) for j in range(1, g_max + 1)}
        fjacs = {j: fjacs[j] for j in range(1, f_max + 1)}
    else:
        fs = f_recursive(zs, top)
        fjacs, gjacs = {}, {}
    gs = {0: np.ones(len(z), dtype=complex)}
    for j in range(1, g_max + 1):
        gs[j] = g_from_f(zs, fs[j])
    return FGVectors(f={j: fs[j] for j in range(1, f_max + 1)}, g=gs,
                     f_jac=fjacs, g_jac=gjacs)


def residual(params: ParameterSet, bundle: CoefficientBundle, zs: ZeroSet) -> np.ndarray:
    """Residual of the algebraic zero system,

        F_n = sum_{k=1}^{q+1} b_k f_n^(k) - sum_{j=0}^{p} a_j g_n^(j),

    which vanishes exactly when the zeta_n are the zeros of the family's
    polynomial.
    """
    p, q = params.p, params.q
    vecs = fg_vectors(zs, q + 1, p)
    out = np.zeros(zs.n, dtype=complex)
    for k in range(1, q + 2):
        out += bundle.b_coeffs[k - 1] * vecs.f[k]
    for j in range(p + 1):
        out -= bundle.a_coeffs[j] * vecs.g[j]
    return out


def _sigma_pair(zs: ZeroSet):
    z = _require_separated(zs)
    return z, _sig(z, 1, 1), _sig(z, 2, 2)


def residual_special(case_id: str, params: ParameterSet, zs: ZeroSet) -> np.ndarray:
    """Hand-expanded sigma-form residuals for the named low-order cases.

    Cases: 'p1q1' (p=q=1), 'p2q1' (p=2, q=1), 'p2q2' (p=q=2), and the split
    'jac1'/'jac2' pair which the p=q=1 zeros satisfy simultaneously.
    """
    arity = {"p1q1": (1, 1), "p2q1": (2, 1), "p2q2": (2, 2),
             "jac1": (1, 1), "jac2": (1, 1)}
    if case_id not in arity:
        raise CaseArityMismatch(f"unknown case {case_id!r}")
    want = arity[case_id]
    if (params.p, params.q) != want:
        raise CaseArityMismatch(
            f"case {case_id} needs (p, q) = {want}, got ({params.p}, {params.q})"
        )
    z, s11, s22 = _sigma_pair(zs)
    n_deg = params.N
    if n_deg != zs.n:
        raise CaseArityMismatch(f"zero count {zs.n} != N={n_deg}")

    if case_id == "p1q1":
        a1, b1 = params.alphas[0], params.betas[0]
        return n_deg - 1 - a1 + b1 * z - 2.0 * (z - 1.0) * s11
    if case_id == "jac1":
        a1, b1 = params.alphas[0], params.betas[0]
        return -a1 + n_deg - 1 + b1 * z + 2.0 * (1.0 - z) * s11
    if case_id == "jac2":
        a1, b1 = params.alphas[0], params.betas[0]
        return ((n_deg - 1) * (a1 + 1.0)
                + 2.0 * (3.0 - n_deg + a1 - (1.0 + b1) * z) * s11
                + 3.0 * (z - 1.0) * (s11 ** 2 - s22))
    if case_id == "p2q1":
        a1, a2 = params.alphas
        b1 = params.betas[0]
        return (-a1 * a2 + (n_deg - 1) * (a1 + a2 + 1.0) + b1 * z
                + 2.0 * (3.0 - n_deg + a1 + a2 - z) * s11
                + 3.0 * s22 + 3.0 * s11 ** 2)
    # p2q2
    a1, a2 = params.alphas
    b1, b2 = params.betas
    return (-a1 * a2 + (n_deg - 1) * (a1 + a2 + 1.0) + b1 * b2 * z
            - 2.0 * ((1.0 + b1 + b2) * z - a1 - a2 + n_deg - 3.0) * s11
            + 3.0 * (z - 1.0) * (s11 ** 2 - s22))


def residual_report(case: str, values: np.ndarray) -> dict:
    """JSON-ready residual report."""
    return {
        "case": case,
        "max_abs": float(np.max(np.abs(values))),
        "per_n": [[v.real, v.imag] for v in values],
    }
