"""Command-line front end: constants, curves, thresholds, verification batches.

Every command emits a machine-readable document (JSON; CSV for curves) that
embeds the package version, the full parameter echo and the seed, so two
runs with the same configuration are byte-identical.  Exit codes: 0 all
passed, 1 at least one bound violation, 2 usage or validity error.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import json
import math
import os
import sys

from . import __version__, attractor, families, interp, special, spectral1d, torus

TWO_PI = 2.0 * math.pi

VERIFY_KINDS = ("h1", "h2", "torus", "trace1", "trace2")


def _emit(text: str, out_path: str | None) -> None:
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _document(command: str, config: dict, body: dict) -> str:
    doc = {"version": __version__, "command": command, "config": config}
    doc.update(body)
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _fail_usage(message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return 2


def cmd_constants(args) -> int:
    if args.d < 1:
        return _fail_usage("--d must be a positive integer")
    if args.gamma < 0:
        return _fail_usage("--gamma must be >= 0")
    lcl = special.semiclassical_constant(args.gamma, args.d)
    scaled = (math.pi / math.sqrt(3.0)) ** args.d * lcl
    body = {
        "semiclassical_constant": lcl,
        "torus_bound_constant": scaled,
        "orthonormal_constant": special.lt_to_orthonormal_constant(scaled, args.d)
        if args.gamma == 1
        else None,
    }
    config = {"gamma": args.gamma, "d": args.d, "seed": None}
    _emit(_document("constants", config, body), args.out)
    return 0


def cmd_k_curve(args) -> int:
    if args.which == "k1" and args.beta_min <= 0:
        return _fail_usage("k1 requires --min > 0")
    if args.which == "k2" and not (0 <= args.beta_min and args.beta_max < 1):
        return _fail_usage("k2 requires 0 <= --min and --max < 1")
    if args.num < 2 or args.beta_min >= args.beta_max:
        return _fail_usage("need --num >= 2 and --min < --max")
    table = interp.export_curve(args.which, args.beta_min, args.beta_max, args.num)
    if args.format == "csv":
        _emit(table.to_csv(), args.out)
    else:
        config = {
            "which": args.which,
            "min": args.beta_min,
            "max": args.beta_max,
            "num": args.num,
            "seed": None,
        }
        _emit(_document("k-curve", config, json.loads(table.to_json())), args.out)
    return 0


def cmd_thresholds(args) -> int:
    if not 0 < args.tol <= 0.01:
        return _fail_usage("--tol must lie in (0, 0.01]")
    body = {
        "beta_star": interp.beta_star(args.tol),
        "beta_star_star": interp.beta_star_star(args.tol),
        "tol": args.tol,
    }
    config = {"tol": args.tol, "seed": None}
    _emit(_document("thresholds", config, body), args.out)
    return 0


def _verify_one(kind: str, args, seed: int):
    if kind == "h1":
        pot = spectral1d.random_psd_potential(
            args.m_dim, args.band, TWO_PI / args.alpha, args.scale, seed
        )
        return spectral1d.verify_bound_h1(pot, args.alpha, args.beta, args.gamma, seed=seed)
    if kind == "h2":
        pot = spectral1d.random_psd_potential(args.m_dim, args.band, TWO_PI, args.scale, seed)
        return spectral1d.verify_bound_h2(pot, args.delta, args.gamma, seed=seed)
    if kind == "torus":
        geom = torus.TorusGeometry((args.alpha,) * (args.d - 1) + (1.0,))
        pot = torus.ScalarPotentialD.random(args.d, args.band, args.scale, seed)
        return torus.verify_bound_torus(pot, geom, args.gamma, seed=seed)
    if kind == "trace1":
        fam = families.random_orthonormal_family(
            args.family_size, args.m_dim, args.band, TWO_PI / args.alpha, False, seed
        )
        return families.verify_trace1(fam, args.alpha, args.beta, seed=seed)
    if kind == "trace2":
        fam = families.random_orthonormal_family(
            args.family_size, args.m_dim, args.band, TWO_PI, True, seed
        )
        return families.verify_trace2(fam, args.delta, seed=seed)
    raise ValueError(f"unknown verify kind {kind!r}")


def cmd_verify(args) -> int:
    if args.kind not in VERIFY_KINDS:
        return _fail_usage(f"--kind must be one of {VERIFY_KINDS}")
    if args.seeds < 1:
        return _fail_usage("--seeds must be >= 1")
    if args.rhs_scale <= 0:
        return _fail_usage("--rhs-scale must be > 0")
    if args.kind == "torus" and args.d < 2:
        return _fail_usage("torus verification needs --d >= 2")
    if args.kind in ("h1", "trace1") and args.beta <= 0:
        return _fail_usage("this kind requires --beta > 0")
    if args.kind in ("h2", "trace2") and not 0 <= args.delta < 1:
        return _fail_usage("this kind requires --delta in [0, 1)")
    if not 0 < args.alpha <= 1 and args.kind == "torus":
        return _fail_usage("torus verification requires --alpha in (0, 1]")

    seeds = [args.seed_base + i for i in range(args.seeds)]
    workers = int(os.environ.get("LT_TORUS_THREADS", "0") or 0) or min(4, os.cpu_count() or 1)
    with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as pool:
        reports = list(pool.map(lambda s: _verify_one(args.kind, args, s), seeds))
    if args.rhs_scale != 1.0:
        reports = [rep.with_rhs_scaled(args.rhs_scale) for rep in reports]
    reports.sort(key=lambda rep: rep.metadata.get("seed", 0))
    all_pass = all(rep.passed for rep in reports)
    config = {
        "kind": args.kind,
        "seeds": args.seeds,
        "seed_base": args.seed_base,
        "seed": args.seed_base,
        "gamma": args.gamma,
        "beta": args.beta,
        "delta": args.delta,
        "alpha": args.alpha,
        "d": args.d,
        "m_dim": args.m_dim,
        "band": args.band,
        "scale": args.scale,
        "family_size": args.family_size,
        "rhs_scale": args.rhs_scale,
    }
    body = {"reports": [rep.to_dict() for rep in reports], "all_pass": all_pass}
    _emit(_document("verify", config, body), args.out)
    return 0 if all_pass else 1


def cmd_attractor(args) -> int:
    try:
        params = attractor.FlowParams(
            nu=args.nu,
            mu=args.mu,
            length=args.length,
            grad_g_norm=args.grad_g,
            aspect=args.aspect,
        )
        if args.formula == "square":
            value = attractor.dim_bound_square(params, c_lt=args.c_lt)
            constants = {"c_lt": args.c_lt}
        elif args.formula == "elongated":
            value = attractor.dim_bound_elongated(params, c_p=args.c_p, c_q=args.c_q)
            constants = {"c_p": args.c_p, "c_q": args.c_q}
        else:
            value = attractor.kolmogorov_number(params)
            constants = {}
    except (ValueError, attractor.ValidityError) as exc:
        return _fail_usage(str(exc))
    config = {
        "formula": args.formula,
        "nu": args.nu,
        "mu": args.mu,
        "length": args.length,
        "grad_g": args.grad_g,
        "aspect": args.aspect,
        "seed": None,
    }
    body = {"value": value, "constants": constants, "valid": True}
    _emit(_document("attractor", config, body), args.out)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ltbounds",
        description="Sharp interpolation constants and spectral-bound verification",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("constants", help="semiclassical and torus-bound constants")
    p.add_argument("--gamma", type=float, default=1.0)
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--out", default=None)
    p.add_argument("--config", default=None)
    p.set_defaults(func=cmd_constants)

    p = sub.add_parser("k-curve", help="export a K1/K2 curve")
    p.add_argument("--which", choices=("k1", "k2"), default="k1")
    p.add_argument("--min", dest="beta_min", type=float, default=0.01)
    p.add_argument("--max", dest="beta_max", type=float, default=0.5)
    p.add_argument("-n", "--num", type=int, default=50)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", default=None)
    p.add_argument("--config", default=None)
    p.set_defaults(func=cmd_k_curve)

    p = sub.add_parser("thresholds", help="compute both K = 1 thresholds")
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--out", default=None)
    p.add_argument("--config", default=None)
    p.set_defaults(func=cmd_thresholds)

    p = sub.add_parser("verify", help="randomized bound verification batch")
    p.add_argument("--kind", choices=VERIFY_KINDS, default="h2")
    p.add_argument("--seeds", type=int, default=10)
    p.add_argument("--seed-base", type=int, default=0)
    p.add_argument("--gamma", type=float, default=1.0)
    p.add_argument("--beta", type=float, default=0.5)
    p.add_argument("--delta", type=float, default=0.5)
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--m-dim", type=int, default=2)
    p.add_argument("--band", type=int, default=2)
    p.add_argument("--scale", type=float, default=1.0)
    p.add_argument("--family-size", type=int, default=3)
    p.add_argument("--rhs-scale", type=float, default=1.0,
                   help="fault injection: multiply every rhs by this factor")
    p.add_argument("--out", default=None)
    p.add_argument("--config", default=None)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("attractor", help="closed-form dimension bounds")
    p.add_argument("--formula", choices=("square", "elongated", "kolmogorov"), default="square")
    p.add_argument("--nu", type=float, default=1.0)
    p.add_argument("--mu", type=float, default=1.0)
    p.add_argument("--length", type=float, default=1.0)
    p.add_argument("--grad-g", type=float, default=1.0)
    p.add_argument("--aspect", type=float, default=1.0)
    p.add_argument("--c-lt", type=float, default=1.5)
    p.add_argument("--c-p", type=float, default=math.pi / 6.0)
    p.add_argument("--c-q", type=float, default=6.0)
    p.add_argument("--out", default=None)
    p.add_argument("--config", default=None)
    p.set_defaults(func=cmd_attractor)

    return parser


def _read_config_file(path: str) -> dict:
    values = {}
    with open(path, encoding="utf-8") as fh:
        for raw in fh:
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"malformed config line: {line!r}")
            key, value = line.split("=", 1)
            values[key.strip()] = value.strip()
    return values


def _inject_config(argv: list[str]) -> list[str]:
    # Config entries become flags inserted right after the subcommand, so any
    # explicit command-line flag (parsed later) wins on conflict.
    if "--config" not in argv:
        return argv
    path = argv[argv.index("--config") + 1]
    tokens = [f"--{key}={value}" for key, value in _read_config_file(path).items()]
    return argv[:1] + tokens + argv[1:]


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = _build_parser()
    try:
        argv = _inject_config(argv)
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    except (OSError, ValueError, IndexError) as exc:
        return _fail_usage(str(exc))
    try:
        return args.func(args)
    except ValueError as exc:
        return _fail_usage(str(exc))


def entrypoint() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    raise SystemExit(main())
