"""Command-line interface: ``circumfeas {solve,bench,profile,gallery,angles}``.

Exit status is 0 on success, 1 on configuration/usage errors and 2 on
runtime failures.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import bench
from .analysis import friedrichs_cosine
from .errors import (
    CircumfeasError,
    InvalidConfigError,
    InvalidInputError,
    UnsupportedCriterionError,
)
from .instances import (
    ProblemInstance,
    canonical_pair,
    dumps,
    gallery,
    gallery_names,
    random_pair,
)
from .methods import MethodKind, Prestep, StopCriterion, solve


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _floats(text):
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _add_instance_args(p):
    g = p.add_argument_group("instance selection")
    g.add_argument("--gallery", metavar="NAME", help=f"one of {', '.join(gallery_names())}")
    g.add_argument("--instance", metavar="FILE", help="instance JSON file")
    g.add_argument("--n", type=int, default=20, help="ambient dimension of a random pair")
    g.add_argument("--dims", type=_floats, metavar="DU,DV,DI",
                   help="subspace and intersection dimensions of a random pair")
    g.add_argument("--angles", type=_floats, metavar="T1,T2,...",
                   help="principal angles of a canonical pair (radians)")
    g.add_argument("--dim-int", type=int, default=1)
    g.add_argument("--seed", type=int, default=0)


def _load_instance(args):
    if args.gallery and args.instance:
        raise InvalidConfigError("use only one of --gallery and --instance")
    if args.gallery:
        return gallery(args.gallery)
    if args.instance:
        with open(args.instance) as fh:
            return ProblemInstance.from_json(fh.read())
    if args.angles:
        return canonical_pair(args.n, args.angles, args.dim_int, seed=args.seed)
    if args.dims:
        du, dv, di = (int(t) for t in args.dims)
    else:
        du, dv, di = max(1, args.n // 4), max(1, args.n // 4), 1
    return random_pair(args.n, du, dv, di, args.seed)


def _criterion(args):
    return StopCriterion(args.criterion, args.tol)


def cmd_solve(args, out):
    inst = _load_instance(args)
    method = MethodKind.parse(args.method)
    if args.x0:
        x0 = np.array(args.x0, dtype=float)
    elif inst.default_start() is not None:
        x0 = inst.default_start()
    else:
        x0 = np.random.Generator(np.random.PCG64([args.seed, 1])).standard_normal(inst.ambient_dim)
    reference = inst.reference_solution
    if reference is None and inst.kind.value != "nonaffine":
        reference = inst.best_approximation(x0)
    res = solve(method, inst.sets, x0, _criterion(args), args.max_iter, args.prestep,
                reference=reference)
    last = res.final_record
    summary = {
        "instance": inst.name,
        "method": method.value,
        "prestep": Prestep.parse(args.prestep).value,
        "iterations": res.iterations,
        "stop_reason": res.stop_reason.value,
        "final_gap": last.gap,
        "final_true_error": last.true_error,
        "fallbacks": res.fallbacks,
        "final_iterate": res.final_iterate.tolist(),
    }
    if args.format == "json":
        out.write(dumps(summary, indent=1) + "\n")
        return 0
    for key, value in summary.items():
        if key != "final_iterate":
            out.write(f"{key}: {value}\n")
    if args.trace:
        for r in res.records[:: max(1, args.trace)]:
            err = "" if r.true_error is None else f" true_error={r.true_error:.6e}"
            out.write(f"  k={r.index} gap={r.gap:.6e}{err}\n")
    return 0


def cmd_bench(args, out):
    config = bench.ExperimentConfig(
        n=args.n,
        count=args.instances,
        starts_per_instance=args.starts,
        methods=[bench.MethodSpec.parse(m, args.prestep) for m in args.methods.split(",")],
        criterion=_criterion(args),
        max_iter=args.max_iter,
        seed=args.seed,
        generator=args.generator,
        dims=tuple(int(t) for t in args.dims) if args.dims else None,
        angles=tuple(args.angles) if args.angles else (0.005,),
        dim_int=args.dim_int,
        workers=args.workers,
        out=args.out,
        format=args.format,
    )
    records = bench.run_experiment(config)
    solved = sum(r.solved for r in records)
    out.write(f"{len(records)} runs, {solved} converged -> {args.out}\n")
    return 0


def cmd_profile(args, out):
    records = bench.read_records(args.input, args.in_format)
    prof = bench.performance_profile(records, args.cost)
    bench.write_profile(prof, args.out, args.format)
    fr = ", ".join(f"{lab}={prof.solve_fraction[lab]:.3f}" for lab in prof.labels)
    out.write(f"{prof.problems} problems, cap {prof.ratio_cap:g}; solved: {fr}\n")
    return 0


def cmd_gallery(args, out):
    if args.name is None:
        for name in gallery_names():
            out.write(name + "\n")
        return 0
    text = gallery(args.name).to_json() + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        out.write(text)
    return 0


def cmd_angles(args, out):
    inst = _load_instance(args)
    if len(inst.sets) != 2 or not all(s.is_affine for s in inst.sets):
        raise InvalidConfigError("angles need a pair of (affine) subspaces")
    fa = friedrichs_cosine(*inst.sets)
    data = {
        "cosine": fa.cosine,
        "angle": fa.angle,
        "intersection_dim": fa.intersection_dim,
        "principal_cosines": fa.principal_cosines.tolist(),
    }
    if args.format == "json":
        out.write(dumps(data, indent=1) + "\n")
    else:
        out.write(f"friedrichs cosine: {fa.cosine:.17g}\n")
        out.write(f"friedrichs angle: {fa.angle:.17g}\n")
        out.write(f"intersection dimension: {fa.intersection_dim}\n")
        out.write("principal cosines: " + " ".join(f"{c:.6g}" for c in fa.principal_cosines) + "\n")
    return 0


def build_parser():
    p = _Parser(prog="circumfeas", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    def run_opts(q, tol=1e-6):
        q.add_argument("--criterion", default="gap", choices=["true", "gap", "fixed"])
        q.add_argument("--tol", type=float, default=tol)
        q.add_argument("--max-iter", type=int, default=100_000)
        q.add_argument("--format", choices=["csv", "json", "text"], default=None)

    s = sub.add_parser("solve", help="run one method on one instance")
    _add_instance_args(s)
    s.add_argument("--method", default="cdrm", choices=[m.value for m in MethodKind])
    s.add_argument("--prestep", default="none", choices=[q.value for q in Prestep])
    s.add_argument("--x0", type=_floats, help="start point (comma-separated)")
    s.add_argument("--trace", type=int, default=0, metavar="EVERY",
                   help="print every EVERY-th record")
    run_opts(s)
    s.set_defaults(func=cmd_solve)

    b = sub.add_parser("bench", help="run a benchmark and write run records")
    b.add_argument("--n", type=int, default=200)
    b.add_argument("--instances", type=int, default=100)
    b.add_argument("--starts", type=int, default=20)
    b.add_argument("--methods", default="map,drm,cdrm",
                   help="comma-separated methods, each optionally METHOD:PRESTEP")
    b.add_argument("--prestep", default="v", choices=[q.value for q in Prestep])
    b.add_argument("--generator", default="random", choices=["random", "canonical"])
    b.add_argument("--dims", type=_floats, metavar="DU,DV,DI")
    b.add_argument("--angles", type=_floats, metavar="T1,T2,...")
    b.add_argument("--dim-int", type=int, default=1)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--workers", type=int, default=None)
    b.add_argument("--out", required=True)
    run_opts(b)
    b.set_defaults(func=cmd_bench)

    f = sub.add_parser("profile", help="performance profile of a records file")
    f.add_argument("--in", dest="input", required=True)
    f.add_argument("--in-format", choices=["csv", "json"], default=None)
    f.add_argument("--out", required=True)
    f.add_argument("--cost", default="iterations", choices=["iterations", "wall_time_us"])
    f.add_argument("--format", choices=["csv", "json"], default=None)
    f.set_defaults(func=cmd_profile)

    g = sub.add_parser("gallery", help="list gallery instances or emit one as JSON")
    g.add_argument("name", nargs="?", choices=gallery_names())
    g.add_argument("--out")
    g.add_argument("--format", choices=["json"], default="json")
    g.set_defaults(func=cmd_gallery)

    a = sub.add_parser("angles", help="Friedrichs angle data of an instance")
    _add_instance_args(a)
    a.add_argument("--format", choices=["text", "json"], default="text")
    a.set_defaults(func=cmd_angles)
    return p


def main(argv=None, out=None):
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        sys.stderr.write(f"{exc}\n")
        return 1
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    if getattr(args, "format", None) == "csv" and args.command == "solve":
        args.format = "text"
    try:
        return args.func(args, out)
    except (InvalidConfigError, InvalidInputError, UnsupportedCriterionError,
            FileNotFoundError, json.JSONDecodeError, KeyError) as exc:
        sys.stderr.write(f"circumfeas: configuration error: {exc}\n")
        return 1
    except (CircumfeasError, ArithmeticError, OSError) as exc:
        sys.stderr.write(f"circumfeas: runtime failure: {exc}\n")
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
