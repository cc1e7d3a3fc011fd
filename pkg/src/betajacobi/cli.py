"""Command-line interface: ``betajacobi {pdf,sample,experiment}``.

Exit codes: 0 success (for ``experiment``: KS pass), 1 KS failure,
2 usage error, 3 parameter outside a formula's domain, 4 numerical
non-convergence.
"""
from __future__ import annotations

import argparse
import contextlib
import json
import math
import sys
from importlib import resources

import numpy as np

from .constants import JacobiParams
from .densities import make_law
from .errors import BetaJacobiError, DomainError
from .experiments import PRESETS, SCHEMA, ExperimentSpec, preset, run_experiment
from .rmt_sampler import sample_batch

EXIT_FAIL, EXIT_USAGE, EXIT_DOMAIN, EXIT_CONVERGENCE = 1, 2, 3, 4

LAWS = {
    "exact-min": "exact_min",
    "exact-max": "exact_max",
    "case1": "case1_exact",
    "case2": "case2_exact",
    "case1-r1": "case1_regime1",
    "case1-r2": "case1_regime2",
    "case2-r1": "case2_regime1",
    "case2-r2": "case2_regime2",
}
_LAW_SCALING = {"case1_regime1": "r1", "case2_regime1": "r1", "case1_regime2": "r2", "case2_regime2": "r2"}


class UsageError(Exception):
    pass


def schema(name: str) -> dict:
    """Shipped JSON schema ``pdf``, ``sample`` or ``experiment``."""
    text = resources.files("betajacobi").joinpath("schemas", f"{name}.schema.json").read_text("utf-8")
    return json.loads(text)


def fmt(x: float) -> str:
    """17 significant digits; enough to recover the double exactly."""
    return format(float(x), ".17g")


def _json_number(x):
    x = float(x)
    return x if math.isfinite(x) else None


def _dump_json(obj, out):
    out.write(json.dumps(obj, allow_nan=False))
    out.write("\n")


def _write_csv(out, header, columns):
    out.write(",".join(header) + "\n")
    for row in zip(*columns):
        out.write(",".join(v if isinstance(v, str) else fmt(v) for v in row) + "\n")


def parse_grid(text: str) -> np.ndarray:
    """``start:stop:count`` (inclusive, evenly spaced)."""
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError(f"grid must look like start:stop:count, got {text!r}")
    try:
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise UsageError(f"grid must look like start:stop:count, got {text!r}") from None
    if count < 1:
        raise UsageError("grid count must be at least 1")
    return np.linspace(start, stop, count)


def _ensemble(args, need_a: bool = True) -> dict:
    """Ensemble parameters from flags; ``--k`` stands for ``a = 2k/beta - 1``."""
    p = {}
    if args.beta is None:
        raise UsageError("--beta is required")
    p["beta"] = args.beta
    if args.a is not None and args.k is not None:
        raise UsageError("give only one of --a and --k")
    if args.k is not None:
        p["k"] = args.k
        p["a"] = 2 * args.k / args.beta - 1
    elif args.a is not None:
        p["a"] = args.a
        kk = 0.5 * args.beta * (args.a + 1)
        if abs(kk - round(kk)) < 1e-12:
            p["k"] = int(round(kk))
    elif need_a:
        raise UsageError("one of --a or --k is required")
    if args.b is not None:
        p["b"] = args.b
    if args.m is not None:
        p["m"] = args.m
    return p


def _add_ensemble_flags(sp):
    sp.add_argument("--beta", type=float)
    sp.add_argument("--a", type=float)
    sp.add_argument("--k", type=int)
    sp.add_argument("--b", type=float)
    sp.add_argument("--m", type=int)


def _output(args):
    if getattr(args, "output", None):
        return open(args.output, "w", encoding="utf-8", newline="\n")
    return contextlib.nullcontext(sys.stdout)


def cmd_pdf(args) -> int:
    kind = LAWS[args.law]
    grid = parse_grid(args.grid)
    p = _ensemble(args, need_a=kind in ("exact_min", "exact_max"))
    law = make_law(kind, **p)
    values = np.asarray(law.pdf(grid), dtype=float)
    scaling = _LAW_SCALING.get(kind, "raw")
    with _output(args) as out:
        if args.format == "csv":
            _write_csv(out, ["x", "pdf"], [grid, values])
        else:
            _dump_json(
                {
                    "schema": SCHEMA,
                    "kind": "pdf",
                    "law": args.law,
                    "params": {k: v for k, v in p.items()},
                    "scaling": scaling,
                    "grid": [float(v) for v in grid],
                    "values": [_json_number(v) for v in values],
                },
                out,
            )
    return 0


def cmd_sample(args) -> int:
    if args.model == "sutton":
        p = _ensemble(args)
        if args.b is None or args.m is None:
            raise UsageError("sutton sampling needs --b and --m")
        params = JacobiParams(p["beta"], p["a"], p["b"], p["m"])
        if args.scaling == "over-beta":
            raise UsageError("--scaling over-beta applies to --model haar only")
    else:
        if args.n is None or args.r is None:
            raise UsageError("haar sampling needs --n and --r")
        if args.scaling in ("r1", "r2"):
            raise UsageError("haar sampling supports --scaling raw or over-beta")
        params = dict(n=args.n, r=args.r, field=args.field)
    scaling = args.scaling.replace("-", "_")
    batch = sample_batch(params, scaling, args.n_samples, args.seed, threads=args.threads, model=args.model)
    with _output(args) as out:
        if args.format == "csv":
            _write_csv(out, ["index", "value"], [[str(i) for i in range(batch.replicate_count)], batch.values])
        else:
            _dump_json(
                {
                    "schema": SCHEMA,
                    "kind": "sample",
                    "model": batch.model,
                    "params": batch.params,
                    "scaling": batch.scaling,
                    "seed": batch.seed,
                    "replicate_count": batch.replicate_count,
                    "values": [float(v) for v in batch.values],
                },
                out,
            )
    return 0


def _spec_from_flags(args) -> ExperimentSpec:
    if args.law is None:
        raise UsageError("give --preset or --law with ensemble flags")
    p = _ensemble(args)
    if args.b is None or args.m is None:
        raise UsageError("experiments need --b and --m")
    kind = LAWS[args.law]
    scaling = args.scaling or _LAW_SCALING.get(kind, "raw")
    factor = args.threshold_factor
    if factor is None:
        factor = 2.0 if kind in _LAW_SCALING else 1.0
    return ExperimentSpec(
        figure_id="custom",
        law=kind,
        beta=p["beta"],
        a=p["a"],
        b=p["b"],
        m=p["m"],
        scaling=scaling,
        n_samples=args.n_samples or 10_000,
        bins=args.bins,
        seed=args.seed if args.seed is not None else 42,
        threshold_factor=factor,
    )


def cmd_experiment(args) -> int:
    if args.preset:
        spec = preset(args.preset, args.seed)
    else:
        spec = _spec_from_flags(args)
    report = run_experiment(spec, threads=args.threads)
    d = report.to_dict()
    d["theory"]["pdf"] = [_json_number(v) for v in d["theory"]["pdf"]]
    with _output(args) as out:
        _dump_json(d, out)
    if args.csv:
        e = report.bin_edges
        with open(f"{args.csv}_histogram.csv", "w", encoding="utf-8", newline="\n") as f:
            _write_csv(f, ["bin_left", "bin_right", "height"], [e[:-1], e[1:], report.heights])
        with open(f"{args.csv}_theory.csv", "w", encoding="utf-8", newline="\n") as f:
            _write_csv(f, ["x", "pdf"], [report.grid, report.theory])
    status = "pass" if report.passed else "FAIL"
    print(
        f"{spec.figure_id}: KS {report.ks_statistic:.5f} vs threshold {report.threshold:.5f} -> {status}",
        file=sys.stderr,
    )
    return 0 if report.passed else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="betajacobi", description="Smallest-eigenvalue laws of beta-Jacobi ensembles."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("pdf", help="evaluate a density on a grid")
    sp.add_argument("--law", required=True, choices=sorted(LAWS))
    _add_ensemble_flags(sp)
    sp.add_argument("--grid", required=True, help="start:stop:count")
    sp.add_argument("--format", choices=("csv", "json"), default="csv")
    sp.add_argument("--output", "-o")
    sp.set_defaults(func=cmd_pdf)

    sp = sub.add_parser("sample", help="draw smallest eigenvalues")
    sp.add_argument("--model", choices=("sutton", "haar"), default="sutton")
    _add_ensemble_flags(sp)
    sp.add_argument("--n", type=int, help="Haar matrix size")
    sp.add_argument("--r", type=int, help="corner size")
    sp.add_argument("--field", choices=("real", "complex"), default="real")
    sp.add_argument("--n-samples", type=int, required=True)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--scaling", choices=("raw", "r1", "r2", "over-beta"), default="raw")
    sp.add_argument("--threads", type=int, default=1)
    sp.add_argument("--format", choices=("csv", "json"), default="csv")
    sp.add_argument("--output", "-o")
    sp.set_defaults(func=cmd_sample)

    sp = sub.add_parser("experiment", help="Monte Carlo fit against a density")
    presets = sorted({k.replace("_", "-") for k in PRESETS} | set(PRESETS))
    sp.add_argument("--preset", choices=presets)
    sp.add_argument("--law", choices=sorted(LAWS))
    _add_ensemble_flags(sp)
    sp.add_argument("--scaling", choices=("raw", "r1", "r2"))
    sp.add_argument("--n-samples", type=int)
    sp.add_argument("--bins", type=int, default=50)
    sp.add_argument("--threshold-factor", type=float)
    sp.add_argument("--seed", type=int)
    sp.add_argument("--threads", type=int, default=1)
    sp.add_argument("--output", "-o")
    sp.add_argument("--csv", metavar="PREFIX", help="also write PREFIX_histogram.csv and PREFIX_theory.csv")
    sp.set_defaults(func=cmd_experiment)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"betajacobi: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DomainError as exc:
        print(f"betajacobi: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except BetaJacobiError as exc:
        print(f"betajacobi: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE


if __name__ == "__main__":
    sys.exit(main())
