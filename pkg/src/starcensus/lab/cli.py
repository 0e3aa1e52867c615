"""Command-line interface.

Subcommands: count, decompose, spheres, verify, sweep, starset, distset,
pinned-avg.  Exit codes: 0 all checks passed, 1 bound violation, 2
usage/parse error, 3 budget exceeded.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .. import _kernels
from ..domain import parse_domain
from ..errors import (
    BudgetExceededError,
    DomainMismatchError,
    InvalidElementError,
    InvalidParamsError,
    ParseError,
    SizeExceedsSpaceError,
    StarcensusError,
)
from ..spheres import enumerate_sphere, sphere_count_oracle, verify_sphere_bound
from ..stars import PointSet, StarSpec, decompose, distance_set, pinned_volume_average, star_set
from .campaigns import METHODS, ExperimentPlan, format_t, run_sweep, run_verify_spheres
from .generators import parse_structured_arg, sample_random_set
from .setio import load_set, save_set

USAGE_ERRORS = (
    InvalidParamsError,
    InvalidElementError,
    ParseError,
    DomainMismatchError,
    SizeExceedsSpaceError,
)


def _add_common(parser):
    parser.add_argument("--domain", required=True, help="F7, F3^2, Z3^2, ...")
    parser.add_argument("--dim", type=int, required=True, help="dimension d")
    parser.add_argument("--budget", type=float, default=None, help="operation budget override")
    parser.add_argument("--workers", type=int, default=1)
    parser.add_argument("--out", default=None, help="output path (CSV or point-set file)")


def _add_set_source(parser):
    group = parser.add_mutually_exclusive_group(required=True)
    group.add_argument("--set", dest="set_file", help="point-set file")
    group.add_argument("--random", type=int, metavar="N", help="seeded uniform sample of size N")
    group.add_argument("--structured", help="KIND:PARAMS, e.g. coordinate-slab:2,5,5")
    parser.add_argument("--seed", type=int, default=1, help="seed for --random")


def _parse_t(text) -> tuple:
    try:
        return tuple(int(v) for v in text.split(","))
    except ValueError:
        raise InvalidParamsError(f"bad distance vector {text!r}") from None


def _load_input_set(args, ctx) -> PointSet:
    if args.set_file:
        return load_set(args.set_file, expect_ctx=ctx, expect_d=args.dim)
    if args.random is not None:
        return sample_random_set(ctx, args.dim, args.random, args.seed)
    return parse_structured_arg(ctx, args.dim, args.structured)


def _spec_from_args(args, ctx) -> StarSpec:
    t_values = _parse_t(args.t)
    if args.k is not None and args.k != len(t_values):
        raise InvalidParamsError(f"--k {args.k} disagrees with --t of length {len(t_values)}")
    return StarSpec(ctx, args.dim, t_values)


def cmd_count(args) -> int:
    ctx = parse_domain(args.domain)
    spec = _spec_from_args(args, ctx)
    e = _load_input_set(args, ctx)
    budget = args.budget
    methods = list(METHODS) if args.method == "all" else [args.method]
    for name in methods:
        rep = METHODS[name](e, spec, budget)
        print(
            f"{name}: nu_{spec.k}({format_t(spec.t_values)}) = {rep.count}   "
            f"M = {float(rep.main_term):.6g}   ratio = {rep.ratio:.6g}"
            + ("" if rep.residual is None else f"   residual = {rep.residual:.3g}")
            + ("" if spec.in_hypothesis else "   [out of hypothesis: zero/non-unit t]")
        )
    return 0


def cmd_decompose(args) -> int:
    ctx = parse_domain(args.domain)
    spec = _spec_from_args(args, ctx)
    e = _load_input_set(args, ctx)
    rep = decompose(e, spec, args.budget)
    print(f"nu = {rep.count}  (via {rep.count_method})")
    print(f"M  = {rep.main_term} = {float(rep.main_term):.9g}")
    for j, (r, b) in enumerate(zip(rep.remainders, rep.binomials)):
        print(f"R_{j} = {r:.9g}   (weight C({spec.k},{j}) = {b})")
    print(f"reconstruction M + sum C(k,j) R_j = {rep.reconstruction:.9g}")
    print(f"|nu - reconstruction| = {rep.residual:.3g}")
    print(f"measured remainder constant = {rep.measured_constant:.6g}")
    return 0


def cmd_spheres(args) -> int:
    ctx = parse_domain(args.domain)
    table = enumerate_sphere(ctx, args.dim, args.t, with_spectrum=args.spectrum,
                             budget=args.budget)
    print(f"|S_{args.t}| = {table.cardinality} over {ctx.descriptor}^{args.dim}")
    if ctx.kind == "prime-field" and args.t != 0:
        print(f"closed-form count: {sphere_count_oracle(ctx, args.dim, args.t)}")
    if args.spectrum:
        print(f"max |Shat_t(m)| over m != 0: {table.max_nonzero_fourier:.6g} "
              f"at m = ({format_t(table.argmax_m)})")
    if args.out:
        save_set(PointSet(ctx, args.dim, table.points), args.out)
        print(f"wrote {table.cardinality} points to {args.out}")
    return 0


def cmd_verify(args) -> int:
    domains = [s.strip() for s in args.domains.split(",") if s.strip()]
    dims = [int(s) for s in args.dims.split(",")]
    rows, violation = run_verify_spheres(domains, dims, out_csv=args.out,
                                         workers=args.workers, budget=args.budget)
    worst = max((float(r[9]) for r in rows), default=0.0)
    print(f"{len(rows)} sphere bounds checked; worst ratio to bound = {worst:.6g}")
    if violation:
        print("BOUND VIOLATION detected")
        return 1
    print("all bounds hold")
    return 0


def cmd_sweep(args) -> int:
    if args.plan:
        with open(args.plan) as fh:
            plan = ExperimentPlan.from_json(fh.read())
    else:
        for req in ("domain", "dim", "t"):
            if getattr(args, req) is None:
                raise InvalidParamsError(f"--{req} is required without --plan")
        source, source_arg = "random", None
        if args.set_file:
            source, source_arg = "file", args.set_file
        elif args.structured:
            source, source_arg = "structured", args.structured
        plan = ExperimentPlan(
            domain=args.domain,
            d=args.dim,
            t_values=_parse_t(args.t),
            source=source,
            sizes=tuple(int(s) for s in args.sizes.split(",")) if args.sizes else (),
            multipliers=tuple(float(m) for m in args.multipliers.split(",")) if args.multipliers else (),
            seeds=tuple(int(s) for s in args.seeds.split(",")),
            source_arg=source_arg,
            methods=tuple(args.methods.split(",")),
        )
    rows = run_sweep(plan, out_csv=args.out, plot_out=args.plot,
                     workers=args.workers, budget=args.budget)
    failed = [r for r in rows if str(r.nu).startswith("!")]
    print(f"{len(rows)} rows ({len(failed)} failed)"
          + (f" -> {args.out}" if args.out else ""))
    for r in rows if args.out is None else []:
        print(",".join(str(v) for v in r.as_list()))
    return 0


def cmd_starset(args) -> int:
    ctx = parse_domain(args.domain)
    e = _load_input_set(args, ctx)
    ss = star_set(e, args.k, args.budget)
    print(f"|S_{args.k}(E)| = {ss.cardinality} of q^k = {ctx.q**args.k} "
          f"({ss.proportion():.4f})")
    return 0


def cmd_distset(args) -> int:
    ctx = parse_domain(args.domain)
    e = _load_input_set(args, ctx)
    values = distance_set(e, args.budget)
    full = len(values) == ctx.q
    print(f"|Delta(E)| = {len(values)} of q = {ctx.q}" + ("  (all of G)" if full else ""))
    if len(values) <= 64:
        print("values:", ",".join(str(v) for v in values))
    return 0


def cmd_pinned_avg(args) -> int:
    ctx = parse_domain(args.domain)
    e = _load_input_set(args, ctx)
    avg = pinned_volume_average(e, args.k, args.budget)
    print(f"average pinned volume = {avg} = {float(avg):.6g}   "
          f"(q^k = {ctx.q**args.k}, ratio {float(avg)/ctx.q**args.k:.4f})")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="starcensus",
        description="Count star configurations over finite fields and residue "
                    "rings, and verify the character-sum bounds behind them "
                    f"(kernel backend: {_kernels.backend_name()}).",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("count", help="one star count, method selectable")
    _add_common(p)
    _add_set_source(p)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--t", required=True, help="comma-separated distances, e.g. 1,1,2")
    p.add_argument("--method", choices=[*METHODS, "all"], default="spectral")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("decompose", help="main term and remainder split")
    _add_common(p)
    _add_set_source(p)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--t", required=True)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("spheres", help="enumerate/export one sphere")
    _add_common(p)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--spectrum", action="store_true", help="also report Fourier data")
    p.set_defaults(func=cmd_spheres)

    p = sub.add_parser("verify", help="sphere bound campaign over domains x dims")
    p.add_argument("--domains", required=True, help="comma list, e.g. F3,F5,Z3^2")
    p.add_argument("--dims", required=True, help="comma list, e.g. 2,3")
    p.add_argument("--budget", type=float, default=None)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", help="seeded statistical sweep to CSV")
    p.add_argument("--plan", default=None, help="JSON plan file (overrides flags)")
    p.add_argument("--domain")
    p.add_argument("--dim", type=int)
    p.add_argument("--t")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--set", dest="set_file")
    group.add_argument("--structured")
    p.add_argument("--sizes", help="comma list of |E| values")
    p.add_argument("--multipliers", help="comma list of multiples of the critical size")
    p.add_argument("--seeds", default="1")
    p.add_argument("--methods", default="spectral")
    p.add_argument("--budget", type=float, default=None)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", default=None)
    p.add_argument("--plot", default=None, help="two-column setsize/ratio file")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("starset", help="cardinality of the realized star-vector set")
    _add_common(p)
    _add_set_source(p)
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(func=cmd_starset)

    p = sub.add_parser("distset", help="distance set of a point set")
    _add_common(p)
    _add_set_source(p)
    p.set_defaults(func=cmd_distset)

    p = sub.add_parser("pinned-avg", help="average pinned distance-vector count")
    _add_common(p)
    _add_set_source(p)
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(func=cmd_pinned_avg)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except USAGE_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except BudgetExceededError as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return 3
    except StarcensusError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
