"""Command-line front end.

Subcommands: zeros, residual, spectrum, jacobi, lambda, sweep, verify-all.
Reports are JSON (default), CSV (sweep only) or plain text; identical
(config, seed) pairs produce byte-identical reports.  Exit codes: 0 all
checked tolerances pass, 1 a tolerance failed, 2 bad usage or input.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from . import checks
from .core import ParameterSet, coefficient_bundle
from .errors import HypzeroError
from .rootfind import find_zeros
from .sampling import SampleLimits, sample_params
from .spectral import (build_Lambda, eigenvalues, expected_spectrum,
                       jacobi_G, jacobi_L_big, jacobi_L_small, jacobi_zeros,
                       spectrum_report, verify_spectrum, verify_stationary)
from .zerofunc import residual, residual_report, residual_special

DEFAULT_TOLS = dict(gamma=1e-12, vieta=1e-9, sigma=1e-10, fg=1e-10, identity=1e-8,
                    residual=1e-8, jacobian=1e-5, spectrum=1e-6, isospectral=1e-6,
                    diophantine=1e-6, stationarity=1e-12, jacobi=1e-6, reduced=1e-6,
                    special=1e-8)


@dataclass
class RunConfig:
    command: str
    params: ParameterSet | None = None
    jacobi_alpha: float | None = None
    jacobi_beta: float | None = None
    n: int | None = None
    seed: int = 0
    draws: int = 50
    max_n: int = 12
    integer_betas: bool = False
    case: str = "generic"
    tol_overrides: dict = field(default_factory=dict)
    output_path: str | None = None
    format: str = "json"


def _parse_complex_list(text: str) -> tuple[complex, ...]:
    if not text:
        return ()
    try:
        return tuple(complex(tok.strip()) for tok in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad complex list {text!r}: {exc}")


def _parse_tol(pairs: list[str]) -> dict:
    out = {}
    for item in pairs:
        if "=" not in item:
            raise argparse.ArgumentTypeError(f"--tol expects key=value, got {item!r}")
        key, val = item.split("=", 1)
        if key not in DEFAULT_TOLS:
            raise argparse.ArgumentTypeError(
                f"unknown tolerance {key!r}; known: {', '.join(sorted(DEFAULT_TOLS))}")
        out[key] = float(val)
    return out


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hypzero",
                                 description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def family_args(p, need_params=True):
        p.add_argument("--N", type=int, required=need_params, dest="n")
        p.add_argument("--alphas", type=_parse_complex_list, default=())
        p.add_argument("--betas", type=_parse_complex_list, default=())

    def common_args(p):
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--tol", action="append", default=[], metavar="KEY=VALUE")
        p.add_argument("--format", choices=("json", "csv", "text"), default="json")
        p.add_argument("--out", dest="output_path", default=None)

    p = sub.add_parser("zeros", help="compute and certify the zero set")
    family_args(p); common_args(p)

    p = sub.add_parser("residual", help="evaluate the algebraic zero system")
    family_args(p); common_args(p)
    p.add_argument("--case", default="generic",
                   choices=("generic", "p1q1", "p2q1", "p2q2", "jac1", "jac2"))

    p = sub.add_parser("spectrum", help="eigenvalues of L vs the closed form")
    family_args(p); common_args(p)

    p = sub.add_parser("jacobi", help="the three Jacobi-node matrices")
    p.add_argument("--N", type=int, required=True, dest="n")
    p.add_argument("--jacobi-alpha", type=float, required=True)
    p.add_argument("--jacobi-beta", type=float, required=True)
    common_args(p)

    p = sub.add_parser("lambda", help="bidiagonal flow matrix and stationarity")
    family_args(p); common_args(p)

    p = sub.add_parser("sweep", help="seeded random sweep with summary rows")
    common_args(p)
    p.add_argument("--draws", type=int, default=50)
    p.add_argument("--max-N", type=int, default=12, dest="max_n")
    p.add_argument("--integer-betas", action="store_true")

    p = sub.add_parser("verify-all", help="run the whole verification battery")
    common_args(p)
    p.add_argument("--draws", type=int, default=25)
    p.add_argument("--max-N", type=int, default=12, dest="max_n")

    return ap


def config_from_args(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(command=args.command)
    cfg.seed = int(os.environ.get("HYPZERO_SEED", getattr(args, "seed", 0)))
    cfg.tol_overrides = _parse_tol(getattr(args, "tol", []))
    cfg.output_path = getattr(args, "output_path", None)
    cfg.format = getattr(args, "format", "json")
    cfg.case = getattr(args, "case", "generic")
    cfg.draws = getattr(args, "draws", 50)
    cfg.max_n = getattr(args, "max_n", 12)
    cfg.integer_betas = bool(getattr(args, "integer_betas", False))
    cfg.n = getattr(args, "n", None)
    if args.command in ("zeros", "residual", "spectrum", "lambda"):
        cfg.params = ParameterSet(N=cfg.n, alphas=getattr(args, "alphas", ()),
                                  betas=getattr(args, "betas", ()))
    if args.command == "jacobi":
        cfg.jacobi_alpha = args.jacobi_alpha
        cfg.jacobi_beta = args.jacobi_beta
    if cfg.format == "csv" and args.command != "sweep":
        raise argparse.ArgumentTypeError("csv output is defined for sweep only")
    return cfg


def _tols(cfg: RunConfig) -> dict:
    t = dict(DEFAULT_TOLS)
    t.update(cfg.tol_overrides)
    return t


def _envelope(cfg: RunConfig, checks_list: list[dict], result=None) -> dict:
    rep = {
        "command": cfg.command,
        "seed": cfg.seed,
        "tolerances": _tols(cfg),
        "checks": checks_list,
        "pass": all(c["pass"] for c in checks_list),
    }
    if cfg.params is not None:
        rep["params"] = cfg.params.to_json_dict()
    if cfg.jacobi_alpha is not None:
        rep["jacobi"] = {"N": cfg.n, "alpha": cfg.jacobi_alpha, "beta": cfg.jacobi_beta}
    if result is not None:
        rep["result"] = result
    return rep


def _pipeline(cfg: RunConfig):
    bundle = coefficient_bundle(cfg.params)
    return bundle, find_zeros(bundle.gammas)


def _run_zeros(cfg: RunConfig) -> dict:
    bundle, zs = _pipeline(cfg)
    checks_list = [{"name": "polish-certificate", "value": zs.residual_norm,
                    "tol": 1e-10 * (1.0 + zs.max_modulus) ** cfg.params.N,
                    "pass": zs.polished}]
    return _envelope(cfg, checks_list, zs.to_json_dict())


def _run_residual(cfg: RunConfig) -> dict:
    bundle, zs = _pipeline(cfg)
    tols = _tols(cfg)
    if cfg.case == "generic":
        values = residual(cfg.params, bundle, zs)
    else:
        values = residual_special(cfg.case, cfg.params, zs)
    rep = residual_report(cfg.case, values)
    bound = tols["residual"] * (1.0 + zs.max_modulus) ** (cfg.params.q + 1)
    checks_list = [{"name": "zero-system-residual", "value": rep["max_abs"],
                    "tol": bound, "pass": rep["max_abs"] < bound}]
    return _envelope(cfg, checks_list, rep)


def _run_spectrum(cfg: RunConfig) -> dict:
    bundle, zs = _pipeline(cfg)
    tols = _tols(cfg)
    rep = verify_spectrum(cfg.params, bundle, zs)
    checks_list = [{"name": "spectrum-match", "value": rep.max_rel_error,
                    "tol": tols["spectrum"], "pass": rep.max_rel_error < tols["spectrum"]}]
    if rep.integer_deviation is not None:
        checks_list.append({"name": "integer-spectrum", "value": rep.integer_deviation,
                            "tol": tols["diophantine"],
                            "pass": rep.integer_deviation < tols["diophantine"]})
    return _envelope(cfg, checks_list, rep.to_json_dict())


def _run_jacobi(cfg: RunConfig) -> dict:
    tols = _tols(cfg)
    n, alpha, beta = cfg.n, cfg.jacobi_alpha, cfg.jacobi_beta
    xs = jacobi_zeros(alpha, beta, n)
    m = np.arange(1, n + 1, dtype=float)
    reports = {
        "first": spectrum_report(eigenvalues(jacobi_L_small(xs, alpha)),
                                 m * (m + alpha)),
        "second": spectrum_report(eigenvalues(jacobi_L_big(xs, alpha, beta)),
                                  m * (m - 1) * (m + alpha)),
        "companion": spectrum_report(eigenvalues(jacobi_G(xs)),
                                     (m - 1) * (m + alpha - 1)),
    }
    checks_list = [{"name": f"jacobi-{k}", "value": r.max_rel_error,
                    "tol": tols["jacobi"], "pass": r.max_rel_error < tols["jacobi"]}
                   for k, r in reports.items()]
    result = {"nodes": list(xs),
              **{k: r.to_json_dict() for k, r in reports.items()}}
    return _envelope(cfg, checks_list, result)


def _run_lambda(cfg: RunConfig) -> dict:
    tols = _tols(cfg)
    bundle = coefficient_bundle(cfg.params)
    lam = build_Lambda(cfg.params)
    diag_exact = bool(np.all(eigenvalues(lam) == np.diag(lam))
                      and np.all(np.diag(lam) == expected_spectrum(cfg.params)))
    stat = verify_stationary(cfg.params, bundle)
    checks_list = [
        {"name": "triangular-flow-matrix", "value": 0.0 if diag_exact else 1.0,
         "tol": 0.5, "pass": diag_exact},
        {"name": "coefficient-stationarity", "value": stat,
         "tol": tols["stationarity"], "pass": stat < tols["stationarity"]},
    ]
    result = {"diagonal": [[v.real, v.imag] for v in np.diag(lam)],
              "stationarity_residual": stat}
    return _envelope(cfg, checks_list, result)


def _sweep_rows(cfg: RunConfig) -> list[dict]:
    tols = _tols(cfg)
    limits = SampleLimits(n_max=cfg.max_n, integer_betas=cfg.integer_betas)
    rows = []
    for i in range(cfg.draws):
        params = sample_params(cfg.seed, i, limits)
        bundle = coefficient_bundle(params)
        zs = find_zeros(bundle.gammas)
        max_residual = float(np.max(np.abs(residual(params, bundle, zs))))
        rep = verify_spectrum(params, bundle, zs)
        bound = tols["residual"] * (1.0 + zs.max_modulus) ** (params.q + 1)
        ok = max_residual < bound and rep.max_rel_error < tols["spectrum"]
        rows.append({
            "draw_index": i, "N": params.N, "p": params.p, "q": params.q,
            "max_residual": max_residual,
            "spectrum_max_rel_err": rep.max_rel_error,
            "pass": ok,
        })
    return rows


def _run_sweep(cfg: RunConfig) -> dict:
    rows = _sweep_rows(cfg)
    n_pass = sum(r["pass"] for r in rows)
    checks_list = [{"name": "sweep", "value": float(len(rows) - n_pass),
                    "tol": 0.5, "pass": n_pass == len(rows),
                    "detail": f"{n_pass}/{len(rows)} pass"}]
    return _envelope(cfg, checks_list, rows)


def _run_verify_all(cfg: RunConfig) -> dict:
    limits = SampleLimits(n_max=cfg.max_n)
    results = checks.run_battery(cfg.seed, cfg.draws, cfg.tol_overrides, limits)
    return _envelope(cfg, [r.to_json_dict() for r in results])


_RUNNERS = {
    "zeros": _run_zeros,
    "residual": _run_residual,
    "spectrum": _run_spectrum,
    "jacobi": _run_jacobi,
    "lambda": _run_lambda,
    "sweep": _run_sweep,
    "verify-all": _run_verify_all,
}


def _emit(cfg: RunConfig, report: dict) -> str:
    if cfg.format == "json":
        return json.dumps(report, indent=2, sort_keys=True) + "\n"
    if cfg.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["draw_index", "N", "p", "q", "max_residual",
                         "spectrum_max_rel_err", "pass"])
        for row in report["result"]:
            writer.writerow([row["draw_index"], row["N"], row["p"], row["q"],
                             repr(row["max_residual"]),
                             repr(row["spectrum_max_rel_err"]),
                             int(row["pass"])])
        return buf.getvalue()
    lines = [f"command: {report['command']}   seed: {report['seed']}"]
    for c in report["checks"]:
        status = "PASS" if c["pass"] else "FAIL"
        detail = f"   {c['detail']}" if c.get("detail") else ""
        lines.append(f"{status}  {c['name']}: value={c['value']:.3e} "
                     f"tol={c['tol']:.3e}{detail}")
    lines.append("overall: " + ("PASS" if report["pass"] else "FAIL"))
    return "\n".join(lines) + "\n"


def run(config: RunConfig) -> tuple[int, dict]:
    """Dispatch one configured command; returns (exit_code, report)."""
    report = _RUNNERS[config.command](config)
    return (0 if report["pass"] else 1), report


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = config_from_args(args)
    except (argparse.ArgumentTypeError, HypzeroError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        code, report = run(cfg)
    except HypzeroError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    text = _emit(cfg, report)
    if cfg.output_path:
        with open(cfg.output_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
