"""Experiment campaigns: bound-verification runs over whole domains and
seeded statistical sweeps of the star counts, emitted as fixed-column
CSV plus a two-column ratio file for plotting.

Sweep CSV columns (fixed):
    q,d,k,ell,T,setsize,seed,method,nu,M,ratio,c_meas,residual,ms

`ell` is the ring exponent (0 for fields); `T` joins distance codes with
'|'.  Rows for failed computations keep their identification columns,
record the error as `!ErrorName` in `nu`, and leave the numeric columns
empty; they are never silently dropped.  Re-running a plan reproduces
every column except `ms` byte-identically.
"""

from __future__ import annotations

import csv
import json
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from fractions import Fraction

from ..domain import RESIDUE_RING, DomainCtx, parse_domain
from ..errors import InvalidParamsError, StarcensusError
from ..spheres import verify_sphere_bound
from ..stars import (
    StarSpec,
    count_stars_brute,
    count_stars_pinned,
    count_stars_spectral,
    main_term,
    measured_constant,
)
from .generators import parse_structured_arg, sample_random_set
from .setio import load_set

METHODS = {
    "brute": count_stars_brute,
    "pinned": count_stars_pinned,
    "spectral": count_stars_spectral,
}

SWEEP_COLUMNS = ["q", "d", "k", "ell", "T", "setsize", "seed", "method",
                 "nu", "M", "ratio", "c_meas", "residual", "ms"]

VERIFY_COLUMNS = ["domain", "q", "ell", "d", "t", "cardinality",
                  "max_fourier", "argmax_m", "bound", "ratio", "violation"]


def critical_size(ctx: DomainCtx, d: int) -> float:
    """The cardinality threshold of the asymptotic count: q^((d+1)/2) for
    fields, q^((d(2l-1)+1)/(2l)) for rings."""
    q = float(ctx.q)
    if ctx.kind == RESIDUE_RING:
        ell = ctx.exponent
        return q ** ((d * (2 * ell - 1) + 1) / (2 * ell))
    return q ** ((d + 1) / 2)


def format_t(t_values) -> str:
    return "|".join(str(int(t)) for t in t_values)


@dataclass(frozen=True)
class ExperimentPlan:
    """A serializable, re-runnable sweep description.

    source: "random" draws seeded sets of the given sizes (or of sizes
    ceil(multiplier * critical_size) when multipliers are given);
    "file" and "structured" take the set from source_arg instead and
    ignore sizes/seeds.
    """

    domain: str
    d: int
    t_values: tuple
    source: str = "random"
    sizes: tuple = ()
    multipliers: tuple = ()
    seeds: tuple = (1,)
    source_arg: str | None = None
    methods: tuple = ("spectral",)

    def __post_init__(self):
        if self.source not in ("random", "file", "structured"):
            raise InvalidParamsError(f"unknown set source {self.source!r}")
        for m in self.methods:
            if m not in METHODS:
                raise InvalidParamsError(f"unknown method {m!r}")
        if self.source == "random" and bool(self.sizes) == bool(self.multipliers):
            raise InvalidParamsError("random source needs exactly one of sizes/multipliers")
        if self.source != "random" and not self.source_arg:
            raise InvalidParamsError(f"{self.source} source needs source_arg")
        object.__setattr__(self, "t_values", tuple(int(t) for t in self.t_values))
        object.__setattr__(self, "sizes", tuple(int(s) for s in self.sizes))
        object.__setattr__(self, "multipliers", tuple(float(m) for m in self.multipliers))
        object.__setattr__(self, "seeds", tuple(int(s) for s in self.seeds))
        object.__setattr__(self, "methods", tuple(self.methods))

    def realized_sizes(self, ctx: DomainCtx) -> list[int]:
        if self.sizes:
            return list(self.sizes)
        base = critical_size(ctx, self.d)
        return [math.ceil(m * base) for m in self.multipliers]

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2)

    @classmethod
    def from_json(cls, text: str) -> "ExperimentPlan":
        data = json.loads(text)
        for key in ("t_values", "sizes", "multipliers", "seeds", "methods"):
            if key in data and data[key] is not None:
                data[key] = tuple(data[key])
        return cls(**data)


@dataclass
class SweepRow:
    q: int
    d: int
    k: int
    ell: int
    t_label: str
    setsize: int | str
    seed: int | str
    method: str
    nu: int | str
    main: str
    ratio: str
    c_meas: str
    residual: str
    ms: str

    def as_list(self):
        return [self.q, self.d, self.k, self.ell, self.t_label, self.setsize,
                self.seed, self.method, self.nu, self.main, self.ratio,
                self.c_meas, self.residual, self.ms]


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, Fraction):
        return repr(float(x))
    if isinstance(x, float):
        return repr(x)
    return str(x)


def _write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def run_sweep(plan: ExperimentPlan, out_csv=None, plot_out=None, workers: int = 1,
              budget=None) -> list[SweepRow]:
    ctx = parse_domain(plan.domain)
    spec = StarSpec(ctx, plan.d, plan.t_values)
    ell = ctx.exponent if ctx.kind == RESIDUE_RING else 0
    t_label = format_t(spec.t_values)

    if plan.source == "random":
        groups = [(size, seed) for size in plan.realized_sizes(ctx) for seed in plan.seeds]

        def build(size, seed):
            return sample_random_set(ctx, plan.d, size, seed)

    else:
        if plan.source == "file":
            fixed = load_set(plan.source_arg, expect_ctx=ctx, expect_d=plan.d)
        else:
            fixed = parse_structured_arg(ctx, plan.d, plan.source_arg)
        groups = [(fixed.size, "")]

        def build(size, seed):
            return fixed

    def run_group(group):
        size, seed = group
        rows = []
        try:
            e = build(size, seed)
        except StarcensusError as exc:
            for method in plan.methods:
                rows.append(SweepRow(ctx.q, plan.d, spec.k, ell, t_label, size, seed,
                                     method, f"!{type(exc).__name__}", "", "", "", "", ""))
            return rows
        for method in plan.methods:
            t0 = time.perf_counter()
            try:
                rep = METHODS[method](e, spec, budget)
            except StarcensusError as exc:
                ms = (time.perf_counter() - t0) * 1000.0
                rows.append(SweepRow(ctx.q, plan.d, spec.k, ell, t_label, e.size, seed,
                                     method, f"!{type(exc).__name__}", "", "", "", "",
                                     f"{ms:.3f}"))
                continue
            ms = (time.perf_counter() - t0) * 1000.0
            c_meas = measured_constant(spec, e.size, rep.count, rep.main_term)
            rows.append(SweepRow(
                ctx.q, plan.d, spec.k, ell, t_label, e.size, seed, method,
                rep.count, _fmt(rep.main_term), _fmt(rep.ratio), _fmt(c_meas),
                _fmt(rep.residual), f"{ms:.3f}",
            ))
        return rows

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            per_group = list(pool.map(run_group, groups))
    else:
        per_group = [run_group(g) for g in groups]
    rows = [row for rows_ in per_group for row in rows_]

    if out_csv:
        _write_csv(out_csv, SWEEP_COLUMNS, [r.as_list() for r in rows])
    if plot_out:
        with open(plot_out, "w") as fh:
            fh.write("# setsize ratio\n")
            for r in rows:
                if r.ratio != "":
                    fh.write(f"{r.setsize} {r.ratio}\n")
    return rows


def run_verify_spheres(domains, dims, out_csv=None, workers: int = 1,
                       budget=None):
    """Bound verification campaign: every in-hypothesis t for each listed
    domain and dimension.  Returns (rows, any_violation)."""
    tasks = []
    for desc in domains:
        ctx = parse_domain(desc) if isinstance(desc, str) else desc
        for d in dims:
            if ctx.kind == RESIDUE_RING:
                tvals = [int(t) for t in ctx.units()]
            else:
                tvals = list(range(1, ctx.q))
            tasks.extend((ctx, d, t) for t in tvals)

    def run_task(task):
        ctx, d, t = task
        return verify_sphere_bound(ctx, d, t, budget=budget)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            reports = list(pool.map(run_task, tasks))
    else:
        reports = [run_task(t) for t in tasks]

    rows = []
    violation = False
    for rep in reports:
        violation = violation or rep.violation
        rows.append([
            rep.domain, rep.q, rep.ell, rep.d, rep.t, rep.cardinality,
            _fmt(rep.max_nonzero_fourier), format_t(rep.argmax_m),
            _fmt(rep.bound), _fmt(rep.ratio), int(rep.violation),
        ])
    if out_csv:
        _write_csv(out_csv, VERIFY_COLUMNS, rows)
    return rows, violation
