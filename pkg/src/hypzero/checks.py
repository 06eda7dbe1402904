"""Reusable verification battery.

Each check runs over a shared list of sampled families (or its own draws),
returns the worst observed value against its tolerance, and never asserts;
callers (CLI and the acceptance suite) decide what failure means.  Scale
factors follow the highest inverse-separation power in the quantity being
checked: residuals scale with (1 + max|zeta|)^(q+1), Jacobians with
(1 + max|zeta|)^(q+2).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .core import (CoefficientBundle, ParameterSet, coefficient_bundle,
                   eval_monic, gamma_closed, gamma_recursive)
from .rootfind import ZeroSet, find_zeros, vieta_coefficients
from .sampling import SampleLimits, SplitMix64, sample_params
from .spectral import (build_Lambda, build_L, eigenvalues, expected_spectrum,
                       fd_jacobian, isospectrality_scan, jacobi_G, jacobi_L_big,
                       jacobi_L_small, jacobi_polynomial_value, jacobi_zeros,
                       spectrum_report, verify_reduced_case, verify_spectrum,
                       verify_stationary)
from .zerofunc import (f_closed, f_recursive, g_closed, g_from_f, residual,
                       residual_special, sigma_vector)


@dataclass(frozen=True)
class CheckResult:
    name: str
    value: float
    tol: float
    passed: bool
    detail: str = ""

    def to_json_dict(self) -> dict:
        return {"name": self.name, "value": self.value, "tol": self.tol,
                "pass": self.passed, "detail": self.detail}


@dataclass(frozen=True)
class Pipeline:
    """One family with its coefficients and polished zero set."""

    params: ParameterSet
    bundle: CoefficientBundle
    zs: ZeroSet


def suite(seed: int, draws: int, limits: SampleLimits = SampleLimits()) -> list[Pipeline]:
    """Deterministic list of sampled families with their pipelines."""
    out = []
    for i in range(draws):
        params = sample_params(seed, i, limits)
        bundle = coefficient_bundle(params)
        out.append(Pipeline(params=params, bundle=bundle,
                            zs=find_zeros(bundle.gammas)))
    return out


def _rel(a: np.ndarray, b: np.ndarray) -> float:
    """max |a - b| scaled by max(1, |b|) entrywise."""
    a = np.asarray(a)
    b = np.asarray(b)
    return float(np.max(np.abs(a - b) / np.maximum(1.0, np.abs(b))))


def check_gamma_routes(pipes: list[Pipeline], tol: float = 1e-12) -> CheckResult:
    worst = 0.0
    for p in pipes:
        worst = max(worst, _rel(gamma_closed(p.params), gamma_recursive(p.params)))
    return CheckResult("coefficient-route-equivalence", worst, tol, worst < tol)


def check_vieta_roundtrip(pipes: list[Pipeline], tol: float = 1e-9) -> CheckResult:
    worst = 0.0
    for p in pipes:
        worst = max(worst, _rel(vieta_coefficients(p.zs.zeros), p.bundle.gammas))
    return CheckResult("vieta-roundtrip", worst, tol, worst < tol)


def check_sigma_identities(pipes: list[Pipeline], tol: float = 1e-10,
                           r_max: int = 3, rho_max: int = 4) -> CheckResult:
    """Both index-shift identities on the interaction sums:
    sigma^(r,rho) = z sigma^(r-1,rho) - sigma^(r-1,rho-1)  and
    z sigma^(r,rho) = sigma^(r+1,rho) + sigma^(r,rho-1)."""
    worst = 0.0
    for p in pipes:
        z = p.zs.zeros
        cache = {(r, rho): sigma_vector(z, r, rho)
                 for r in range(r_max + 2) for rho in range(rho_max + 1)}
        for r in range(1, r_max + 1):
            for rho in range(1, rho_max + 1):
                lhs = cache[(r, rho)]
                rhs = z * cache[(r - 1, rho)] - cache[(r - 1, rho - 1)]
                scale = np.maximum(1.0, np.abs(lhs) + np.abs(z * cache[(r - 1, rho)])
                                   + np.abs(cache[(r - 1, rho - 1)]))
                worst = max(worst, float(np.max(np.abs(lhs - rhs) / scale)))
        for r in range(r_max + 1):
            for rho in range(1, rho_max + 1):
                lhs = z * cache[(r, rho)]
                rhs = cache[(r + 1, rho)] + cache[(r, rho - 1)]
                scale = np.maximum(1.0, np.abs(lhs) + np.abs(cache[(r + 1, rho)])
                                   + np.abs(cache[(r, rho - 1)]))
                worst = max(worst, float(np.max(np.abs(lhs - rhs) / scale)))
    return CheckResult("sigma-shift-identities", worst, tol, worst < tol)


def check_fg_closed_forms(pipes: list[Pipeline], tol: float = 1e-10) -> CheckResult:
    worst = 0.0
    for p in pipes:
        fs = f_recursive(p.zs, 4)
        for j in (1, 2, 3, 4):
            worst = max(worst, _rel(f_closed(p.zs, j), fs[j]))
        for j in (1, 2, 3):
            worst = max(worst, _rel(g_closed(p.zs, j), g_from_f(p.zs, fs[j])))
    return CheckResult("fg-closed-forms", worst, tol, worst < tol)


def check_operator_identities(pipes: list[Pipeline], tol: float = 1e-8,
                              points: int = 5, seed: int = 0) -> CheckResult:
    """Certify that applying (z d/dz - N)^j to the polynomial equals
    psi(z) sum_n f_n^(j)/(z - zeta_n), and its d/dz companion the g analogue.

    Left sides act diagonally on the coefficient representation (the operator
    multiplies the z^(N-m) monomial by -m); right sides use only the zeros.
    """
    worst = 0.0
    for idx, p in enumerate(pipes):
        g = p.bundle.gammas
        n_deg = p.params.N
        z0 = p.zs.zeros
        fs = f_recursive(p.zs, 3)
        gs = {j: g_from_f(p.zs, fs[j]) for j in (1, 2, 3)}
        rng = SplitMix64(seed, idx)
        for _ in range(points):
            radius = (1.0 + p.zs.max_modulus) * (1.2 + 0.8 * rng.uniform())
            zpt = radius * cmath.exp(2j * math.pi * rng.uniform())
            psi = complex(np.prod(zpt - z0))
            for j in (1, 2, 3):
                coeff = g * (-np.arange(n_deg + 1, dtype=float)) ** j
                lhs_f = eval_monic(coeff, zpt)
                rhs_f = psi * complex(np.sum(fs[j] / (zpt - z0)))
                worst = max(worst, abs(lhs_f - rhs_f) / max(1.0, abs(lhs_f)))
                dcoeff = coeff[:-1] * np.arange(n_deg, 0, -1, dtype=float)
                lhs_g = eval_monic(dcoeff, zpt)
                rhs_g = psi * complex(np.sum(gs[j] / (zpt - z0)))
                worst = max(worst, abs(lhs_g - rhs_g) / max(1.0, abs(lhs_g)))
    return CheckResult("operator-identities", worst, tol, worst < tol)


def _residual_scale(p: Pipeline) -> float:
    return (1.0 + p.zs.max_modulus) ** (p.params.q + 1)


def check_residual(pipes: list[Pipeline], tol: float = 1e-8) -> CheckResult:
    """Zero-system residual, scaled by (1 + max|zeta|)^(q+1)."""
    worst = 0.0
    for p in pipes:
        value = float(np.max(np.abs(residual(p.params, p.bundle, p.zs))))
        worst = max(worst, value / _residual_scale(p))
    return CheckResult("zero-system-residual", worst, tol, worst < tol)


def check_residual_sensitivity(pipes: list[Pipeline], bump: float = 1e-3,
                               floor: float = 1e-4) -> CheckResult:
    """Moving any single zero by ``bump`` must push the residual above ``floor``."""
    worst = math.inf
    from .rootfind import _separation
    for p in pipes:
        for m in range(p.zs.n):
            z = p.zs.zeros.copy()
            z[m] += bump
            moved = ZeroSet(zeros=z, min_separation=_separation(z),
                            max_modulus=float(np.max(np.abs(z))), residual_norm=0.0)
            value = float(np.max(np.abs(residual(p.params, p.bundle, moved))))
            worst = min(worst, value)
    return CheckResult("residual-sensitivity", worst, floor, worst > floor,
                       detail="worst value must exceed tol")


def check_jacobian_vs_fd(pipes: list[Pipeline], tol: float = 1e-5) -> CheckResult:
    """||L - FD||_max scaled by (1 + max|zeta|)^(q+2)."""
    worst = 0.0
    for p in pipes:
        diff = np.max(np.abs(build_L(p.params, p.bundle, p.zs)
                             - fd_jacobian(p.params, p.bundle, p.zs)))
        worst = max(worst, float(diff) / (1.0 + p.zs.max_modulus) ** (p.params.q + 2))
    return CheckResult("jacobian-vs-fd", worst, tol, worst < tol)


def check_spectrum(pipes: list[Pipeline], tol: float = 1e-6) -> CheckResult:
    worst = 0.0
    for p in pipes:
        worst = max(worst, verify_spectrum(p.params, p.bundle, p.zs).max_rel_error)
    return CheckResult("spectrum-match", worst, tol, worst < tol)


def check_isospectrality(pipes: list[Pipeline], tol: float = 1e-6,
                         n_perturbations: int = 10, seed: int = 0) -> CheckResult:
    worst = 0.0
    ok = True
    for p in pipes:
        rep = isospectrality_scan(p.params, n_perturbations=n_perturbations,
                                  seed=seed, tol=tol)
        ok = ok and rep.passed
        for e in rep.alpha_max_rel_errors:
            worst = max(worst, e)
        if rep.control_max_rel_error is not None:
            worst = max(worst, rep.control_max_rel_error)
    return CheckResult("alpha-isospectrality", worst, tol, ok and worst < tol)


def check_diophantine(seed: int, draws: int, tol: float = 1e-6,
                      n_max: int = 10) -> CheckResult:
    """Integer betas must give an integer spectrum."""
    limits = SampleLimits(n_max=n_max, integer_betas=True)
    worst = 0.0
    for p in suite(seed, draws, limits):
        rep = verify_spectrum(p.params, p.bundle, p.zs)
        if rep.integer_deviation is not None:
            worst = max(worst, rep.integer_deviation)
    return CheckResult("integer-spectrum", worst, tol, worst < tol)


def check_lambda_triangular(pipes: list[Pipeline]) -> CheckResult:
    """Eigenvalues of the bidiagonal flow matrix equal its diagonal exactly."""
    ok = True
    for p in pipes:
        lam = build_Lambda(p.params)
        ok = ok and bool(np.all(eigenvalues(lam) == np.diag(lam)))
        ok = ok and bool(np.all(np.diag(lam) == expected_spectrum(p.params)))
    return CheckResult("triangular-flow-matrix", 0.0 if ok else 1.0, 0.5, ok,
                       detail="exact equality")


def check_stationarity(pipes: list[Pipeline], tol: float = 1e-12) -> CheckResult:
    worst = 0.0
    for p in pipes:
        worst = max(worst, verify_stationary(p.params, p.bundle))
    return CheckResult("coefficient-stationarity", worst, tol, worst < tol)


def check_jacobi_matrices(seed: int, draws: int = 10, tol: float = 1e-6,
                          n_max: int = 10) -> CheckResult:
    """All three Jacobi-node matrices against their closed spectra, plus
    beta-independence of every spectrum across three beta probes at fixed
    alpha, with a three-term-recurrence residual as a node sanity check."""
    worst = 0.0
    nodes_ok = True
    rng = SplitMix64(seed, 0x1ACB)
    for _ in range(draws):
        n = rng.integer(1, n_max)
        alpha = rng.uniform(-0.9, 3.0)
        beta = rng.uniform(-0.9, 3.0)
        m = np.arange(1, n + 1, dtype=float)
        per_beta = []
        for b_probe in (beta, 0.25 * (beta + 1.0), beta + 0.5):
            xs = jacobi_zeros(alpha, b_probe, n)
            reps = (
                spectrum_report(eigenvalues(jacobi_L_small(xs, alpha)), m * (m + alpha)),
                spectrum_report(eigenvalues(jacobi_L_big(xs, alpha, b_probe)),
                                m * (m - 1) * (m + alpha)),
                spectrum_report(eigenvalues(jacobi_G(xs)), (m - 1) * (m + alpha - 1)),
            )
            worst = max(worst, *(r.max_rel_error for r in reps))
            per_beta.append(tuple(np.sort_complex(r.computed) for r in reps))
            poly_res = max(abs(jacobi_polynomial_value(alpha, b_probe, n, x)) for x in xs)
            scale = 1.0 + abs(jacobi_polynomial_value(alpha, b_probe, n, 1.0))
            nodes_ok = nodes_ok and poly_res < 1e-4 * scale
        for other in per_beta[1:]:
            for s_other, s_ref in zip(other, per_beta[0]):
                worst = max(worst, float(np.max(np.abs(s_other - s_ref)
                                                / np.maximum(1.0, np.abs(s_ref)))))
    return CheckResult("jacobi-matrices", worst, tol, nodes_ok and worst < tol,
                       detail="" if nodes_ok else "recurrence sanity check failed")


def check_reduced_family(seed: int, draws: int = 5, tol: float = 1e-6,
                         special_tol: float = 1e-8) -> CheckResult:
    """Extended-matrix spectra on plain p=q=1 zeros for three alpha_2 values
    (one of them 0), plus both split-system residuals on the same zeros."""
    worst = 0.0
    ok = True
    rng = SplitMix64(seed, 0x2ED0)
    for _ in range(draws):
        n = rng.integer(2, 8)
        a1 = rng.uniform(0.5, 3.0)
        b1 = rng.uniform(0.5, 3.0)
        for a2 in (0.0, rng.uniform(0.5, 3.0), rng.uniform(-1.5, -0.2)):
            rep = verify_reduced_case(a1, b1, a2, n)
            worst = max(worst, rep.max_rel_error)
        params = ParameterSet(N=n, alphas=(a1,), betas=(b1,))
        zs = find_zeros(gamma_recursive(params))
        for case in ("jac1", "jac2"):
            r = float(np.max(np.abs(residual_special(case, params, zs))))
            ok = ok and r < special_tol
    return CheckResult("reduced-case-family", worst, tol, ok and worst < tol)


def run_battery(seed: int, draws: int, tols: dict[str, float] | None = None,
                limits: SampleLimits = SampleLimits()) -> list[CheckResult]:
    """The full verification battery, as used by the CLI."""
    t = dict(gamma=1e-12, vieta=1e-9, sigma=1e-10, fg=1e-10, identity=1e-8,
             residual=1e-8, jacobian=1e-5, spectrum=1e-6, isospectral=1e-6,
             diophantine=1e-6, stationarity=1e-12, jacobi=1e-6, reduced=1e-6,
             special=1e-8)
    if tols:
        t.update(tols)
    pipes = suite(seed, draws, limits)
    iso_pipes = pipes[: min(len(pipes), 10)]
    return [
        check_gamma_routes(pipes, t["gamma"]),
        check_vieta_roundtrip(pipes, t["vieta"]),
        check_sigma_identities(pipes, t["sigma"]),
        check_fg_closed_forms(pipes, t["fg"]),
        check_operator_identities(pipes, t["identity"], seed=seed),
        check_residual(pipes, t["residual"]),
        check_jacobian_vs_fd(pipes, t["jacobian"]),
        check_spectrum(pipes, t["spectrum"]),
        check_isospectrality(iso_pipes, t["isospectral"], seed=seed),
        check_diophantine(seed + 1, min(draws, 25), t["diophantine"]),
        check_lambda_triangular(pipes),
        check_stationarity(pipes, t["stationarity"]),
        check_jacobi_matrices(seed, 10, t["jacobi"]),
        check_reduced_family(seed, 5, t["reduced"], t["special"]),
    ]
