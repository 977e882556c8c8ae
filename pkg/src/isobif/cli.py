"""Command-line entry point and result-file writers.

Subcommands map one-to-one onto the library layers:

* ``spectrum``     eigenvalues of the linearized problem for one entry
* ``branch``       pseudo-arclength continuation of one bifurcating branch
* ``census``       all nontrivial solutions at a fixed parameter
* ``predict``      solution-count prediction for an sp-family metric
* ``metrics``      curvature data for a homogeneous metric
* ``verify-poly``  quartic-polynomial identity and invariance checks
* ``acceptance``   the full ten-criterion suite

Every result file names the configuration hash in its header, floats are
written with 17 significant digits, and JSON keys are sorted, so a rerun
with the same configuration and seed produces byte-identical result
files.  The per-run manifest records versions and wall time and is the
one deliberately non-reproducible artifact.

Exit codes: 0 success, 1 numerical assertion failure (a diagnostic file
is written), 2 usage errors such as an unknown catalog entry.
"""

from __future__ import annotations

import argparse
import json
import platform
import re
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from . import bifurcation as bif
from . import polynomials as poly
from .acceptance import run_all
from .config import RunConfig, apply_worker_count, load_config
from .geometry import catalog, get_entry
from .metrics import (
    HopfMetric,
    predict_counts,
    scalar_curvature,
    sectional_curvatures,
    yamabe_lambda,
)
from .odecore import EquationParams
from .spectrum import find_eigenvalues


def _fmt(x: float) -> str:
    return f"{float(x):.17g}"


def _slug(token: str) -> str:
    return re.sub(r"[^A-Za-z0-9_.-]+", "", token.replace("(", "_").replace(",", "-"))


def _write_csv(path: Path, cfg: RunConfig, columns, rows) -> None:
    lines = [f"# config {cfg.hash()}", ",".join(columns)]
    for row in rows:
        lines.append(
            ",".join(_fmt(v) if isinstance(v, float) else str(v) for v in row)
        )
    path.write_text("\n".join(lines) + "\n")


def _write_json(path: Path, cfg: RunConfig, obj: dict) -> None:
    obj = dict(obj)
    obj["config_hash"] = cfg.hash()
    path.write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def _manifest(out: Path, sub: str, cfg: RunConfig, t0: float, files) -> None:
    import numba
    import scipy

    data = {
        "subcommand": sub,
        "config": {
            k: getattr(cfg, k)
            for k in (
                "tol_ode",
                "tol_newton",
                "delta_endpoint_factor",
                "grid_n",
                "fine_n",
                "overflow_cap",
                "dedup_eps",
                "worker_count",
                "output_dir",
                "seed",
            )
        },
        "config_hash": cfg.hash(),
        "versions": {
            "python": platform.python_version(),
            "numpy": np.__version__,
            "scipy": scipy.__version__,
            "numba": numba.__version__,
            "isobif": __version__,
        },
        "wall_time_s": time.time() - t0,
        "outputs": [str(f) for f in files],
    }
    (out / f"manifest_{sub}.json").write_text(
        json.dumps(data, indent=2, sort_keys=True) + "\n"
    )


def _diagnostic(out: Path, sub: str, cfg: RunConfig, message: str) -> None:
    _write_json(out / f"diagnostic_{sub}.json", cfg, {"subcommand": sub, "error": message})


def _cmd_spectrum(args, cfg: RunConfig, out: Path):
    entry = get_entry(args.entry)
    results = find_eigenvalues(entry, args.count, cfg)
    rows = [
        (
            r.k,
            float(r.mu_numeric),
            float(r.mu_closed),
            abs(r.mu_numeric - r.mu_closed) / r.mu_closed,
            r.zero_count,
            float(r.u_at_tstar),
        )
        for r in results
    ]
    path = out / f"spectrum_{_slug(entry.id)}.csv"
    _write_csv(
        path, cfg, ("k", "mu_numeric", "mu_closed", "rel_err", "n_k", "u_at_tstar"), rows
    )
    return [path]


def _cmd_branch(args, cfg: RunConfig, out: Path):
    entry = get_entry(args.entry)
    seeds = bif.seed_branch(entry, args.q, args.k, cfg=cfg)
    files = []
    dead = []
    base = f"branch_{_slug(entry.id)}_q{args.q:g}_k{args.k}"
    for label, seed in zip(("plus", "minus"), seeds):
        branch = bif.continue_branch(
            seed, lambda_max=args.lambda_max, max_steps=args.max_steps, cfg=cfg
        )
        rows = [
            (
                args.k,
                step,
                float(p.lam),
                float(p.alpha),
                float(p.beta),
                float(p.sup_dist),
                p.zero_count,
                float(p.residual),
            )
            for step, p in enumerate(branch.points)
        ]
        path = out / f"{base}_{label}.csv"
        _write_csv(
            path,
            cfg,
            (
                "branch_k",
                "step",
                "lambda",
                "alpha",
                "beta",
                "sup_dist",
                "zero_count",
                "residual",
            ),
            rows,
        )
        plot = out / f"{base}_{label}_plot.csv"
        _write_csv(
            plot,
            cfg,
            ("lambda", "sup_dist"),
            [(float(p.lam), float(p.sup_dist)) for p in branch.points],
        )
        files += [path, plot]
        if branch.status.startswith("dead"):
            dead.append(f"{label}: {branch.status}")
    if dead:
        raise ArithmeticError("; ".join(dead))
    return files


def _cmd_census(args, cfg: RunConfig, out: Path):
    entry = get_entry(args.entry)
    params = EquationParams(entry=entry, q=args.q, lam=args.lam)
    cen = bif.census(params, cfg.grid_n, cfg)
    data = {
        "entry": entry.id,
        "q": args.q,
        "lambda": args.lam,
        "bound_A": cen.bound_A,
        "solutions": [
            {
                "alpha": s.alpha,
                "beta": s.beta,
                "residual": s.residual,
                "zero_count": s.zero_count,
                "sup_dist": s.sup_dist,
            }
            for s in cen.solutions
        ],
    }
    path = out / f"census_{_slug(entry.id)}_q{args.q:g}_lam{args.lam:g}.json"
    _write_json(path, cfg, data)
    return [path]


def _parse_scales(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(p) for p in text.split(","))
    except ValueError as exc:
        raise SystemExit(f"bad --x value {text!r}: {exc}")


def _cmd_predict(args, cfg: RunConfig, out: Path):
    metric = HopfMetric(args.family, args.n, _parse_scales(args.x))
    rep = predict_counts(metric, args.q)
    path = out / f"predict_{args.family}_n{args.n}.json"
    _write_json(path, cfg, rep)
    return [path]


def _cmd_metrics(args, cfg: RunConfig, out: Path):
    metric = HopfMetric(args.family, args.n, _parse_scales(args.x))
    s = scalar_curvature(metric)
    data = {
        "family": metric.family,
        "n": metric.n,
        "scales": list(metric.scales),
        "s": s,
        "lambda": yamabe_lambda(metric) if s > 0.0 else None,
        "sectional": [
            {"label": v.label, "value": v.value, "weight": v.weight}
            for v in sectional_curvatures(metric)
        ],
    }
    path = out / f"metrics_{args.family}_n{args.n}.json"
    _write_json(path, cfg, data)
    return [path]


def _cmd_verify_poly(args, cfg: RunConfig, out: Path):
    rng = np.random.default_rng(cfg.seed)
    if args.which == "fkm":
        system = poly.build_clifford(args.n)
        dim = 2 * system.l
        worst_sp = worst_u = 0.0
        for _ in range(args.samples):
            x = rng.normal(size=dim)
            f = poly.fkm_eval(system, x)
            Q = poly.right_sp1_matrix(system, poly.random_unit_quaternion(rng))
            worst_sp = max(worst_sp, abs(poly.fkm_eval(system, Q @ x) - f) / abs(f))
            U = poly.random_unitary(args.n + 1, rng)
            M = poly.unitary_action_matrix(system, U)
            worst_u = max(worst_u, abs(poly.fkm_eval(system, M @ x) - f) / abs(f))
        rep = poly.verify_cm(
            lambda x: poly.fkm_eval(system, x),
            dim,
            4,
            samples=max(10, args.samples // 5),
            seed=cfg.seed,
            grad=lambda x: poly.fkm_grad(system, x),
            expected_c=2 * args.n - 3,
        )
        invariance = {"right_sp1": worst_sp, "diagonal_unitary": worst_u}
        ok = (
            rep["max_grad_residual"] <= 1e-9
            and worst_sp <= 1e-9
            and worst_u <= 1e-9
            and rep["c_matches_expected"]
        )
    else:
        dim = 8 * (args.n + 1)
        worst_q = 0.0
        for _ in range(args.samples):
            z = rng.normal(size=dim)
            u, v = poly.ot_split(z)
            f = poly.ot_eval(u, v)
            q = poly.random_unit_quaternion(rng)
            f2 = poly.ot_eval(
                poly.sp1_right_diagonal(u, q), poly.sp1_right_diagonal(v, q)
            )
            worst_q = max(worst_q, abs(f2 - f) / max(1.0, abs(f)))
        rep = poly.verify_cm(
            poly.ot_eval_flat, dim, 4, samples=max(10, args.samples // 10), seed=cfg.seed
        )
        invariance = {"sp1_diagonal": worst_q}
        ok = worst_q <= 1e-9 and rep["max_grad_residual"] <= 1e-5
    data = {
        "which": args.which,
        "n": args.n,
        "samples": args.samples,
        "seed": cfg.seed,
        "max_grad_residual": rep["max_grad_residual"],
        "c_estimate": rep["c_estimate"],
        "c_int": rep["c_int"],
        "c_deviation": rep["c_deviation"],
        "normalization": rep["normalization"],
        "invariance_residuals": invariance,
        "passed": ok,
    }
    path = out / f"verify_{args.which}_n{args.n}.json"
    _write_json(path, cfg, data)
    if not ok:
        raise ArithmeticError(f"polynomial identity checks failed, see {path}")
    return [path]


def _cmd_acceptance(args, cfg: RunConfig, out: Path):
    ok, results = run_all(cfg)
    path = out / "acceptance.json"
    _write_json(path, cfg, {"passed": ok, "criteria": results})
    if not ok:
        raise ArithmeticError(f"acceptance criteria failed, see {path}")
    return [path]


def _cmd_catalog(args, cfg: RunConfig, out: Path):
    data = {"entries": [e.to_json_dict() for e in catalog()]}
    path = out / "catalog.json"
    _write_json(path, cfg, data)
    return [path]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="isobif",
        description="Bifurcation toolkit for equations reduced along isoparametric functions.",
    )
    parser.add_argument("--config", help="key=value configuration file")
    parser.add_argument("--out", help="output directory (overrides config)")
    parser.add_argument("--seed", type=int, help="seed override")
    parser.add_argument("--workers", type=int, help="worker count override")
    parser.add_argument("--grid-n", type=int, help="census seed grid size")
    parser.add_argument("--fine-n", type=int, help="oracle grid size")
    parser.add_argument(
        "--set",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        help="override any configuration key",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("spectrum", help="linearized eigenvalues for an entry")
    p.add_argument("--entry", required=True)
    p.add_argument("--count", type=int, default=6)

    p = sub.add_parser("branch", help="continue one bifurcating branch")
    p.add_argument("--entry", required=True)
    p.add_argument("--q", type=float, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--lambda-max", type=float, default=40.0)
    p.add_argument("--max-steps", type=int, default=2000)

    p = sub.add_parser("census", help="all solutions at a fixed parameter")
    p.add_argument("--entry", required=True)
    p.add_argument("--q", type=float, required=True)
    p.add_argument("--lambda", dest="lam", type=float, required=True)

    p = sub.add_parser("predict", help="solution-count prediction (sp family)")
    p.add_argument("--family", choices=("sp",), default="sp")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--x", required=True, help="comma-separated scales")
    p.add_argument("--q", type=float, default=None)

    p = sub.add_parser("metrics", help="curvature data for a homogeneous metric")
    p.add_argument("--family", choices=("u", "sp", "spin9"), required=True)
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--x", required=True, help="comma-separated scales")

    p = sub.add_parser("verify-poly", help="quartic polynomial checks")
    p.add_argument("--which", choices=("fkm", "ot"), required=True)
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--samples", type=int, default=100)

    sub.add_parser("acceptance", help="run the full acceptance suite")
    sub.add_parser("catalog", help="dump the geometry catalog as JSON")
    return parser


_HANDLERS = {
    "spectrum": _cmd_spectrum,
    "branch": _cmd_branch,
    "census": _cmd_census,
    "predict": _cmd_predict,
    "metrics": _cmd_metrics,
    "verify-poly": _cmd_verify_poly,
    "acceptance": _cmd_acceptance,
    "catalog": _cmd_catalog,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    overrides: dict = {}
    for item in args.set:
        if "=" not in item:
            parser.error(f"--set needs KEY=VALUE, got {item!r}")
        key, _, value = item.partition("=")
        overrides[key.strip()] = value.strip()
    for key, attr in (
        ("output_dir", "out"),
        ("seed", "seed"),
        ("worker_count", "workers"),
        ("grid_n", "grid_n"),
        ("fine_n", "fine_n"),
    ):
        val = getattr(args, attr, None)
        if val is not None:
            overrides[key] = val
    try:
        cfg = load_config(args.config, overrides)
    except (ValueError, OSError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    apply_worker_count(cfg)
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    t0 = time.time()
    handler = _HANDLERS[args.subcommand]
    try:
        files = handler(args, cfg, out)
    except KeyError as exc:
        print(exc.args[0] if exc.args else str(exc), file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"invalid request: {exc}", file=sys.stderr)
        return 2
    except ArithmeticError as exc:
        _diagnostic(out, args.subcommand, cfg, str(exc))
        print(f"numerical failure: {exc}", file=sys.stderr)
        _manifest(out, args.subcommand, cfg, t0, [])
        return 1
    _manifest(out, args.subcommand, cfg, t0, files)
    for f in files:
        print(f)
    return 0


if __name__ == "__main__":
    sys.exit(main())
