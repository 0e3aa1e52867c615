"""Counting k-stars: tuples (hub, leaf_1..leaf_k) in E^{k+1} whose hub
distances realize a prescribed vector T = (t_1..t_k).

Three independent routes compute the same integer:

  brute     full (k+1)-fold loop over tuples (compiled kernel when built)
  pinned    per-hub neighbor counts n_t(x), then sum of products
  spectral  one convolution with each sphere indicator, then a pointwise
            product-sum over the set, exact after rounding

plus a frequency-space decomposition that splits the count into the main
term M = |E|^{k+1} * prod_i |S_{t_i}| / q^d and remainders R_j indexed by
how many of the k frequencies vanish, reconstructing the count exactly.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

import numpy as np

from . import _kernels
from .domain import RESIDUE_RING, DomainCtx
from .errors import (
    BudgetExceededError,
    InvalidParamsError,
    RoundingResidualError,
    ShapeMismatchError,
    SizeTooLargeError,
    check_budget,
    current_budget,
)
from .spectral import (
    GridFn,
    convolve,
    dft_forward,
    exact_zero_frequencies,
    flat_coords,
    grid_from_points,
    negation_view,
    translate,
)
from .spheres import norm_grid, sphere_indicator, sphere_sizes

DECOMP_DEFAULT_BUDGET = 100_000_000
STARSET_SPACE_BUDGET = 10_000_000
_INT64_SAFE = 1 << 62


# ----------------------------------------------------------------------
# Data types
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class StarSpec:
    """Dimension, arity, and the distance vector of a star census."""

    ctx: DomainCtx
    d: int
    t_values: tuple

    def __post_init__(self):
        if self.d < 1:
            raise InvalidParamsError("dimension must be >= 1")
        if len(self.t_values) < 1:
            raise InvalidParamsError("need at least one distance")
        object.__setattr__(
            self, "t_values", tuple(self.ctx.validate_element(t) for t in self.t_values)
        )

    @property
    def k(self) -> int:
        return len(self.t_values)

    @property
    def in_hypothesis(self) -> bool:
        """Whether every t_i is nonzero (fields) / a unit (rings)."""
        return all(bool(self.ctx.is_unit_mask(t)) for t in self.t_values)


class PointSet:
    """A deduplicated set of points in G^d, stored sorted for a canonical
    representation."""

    def __init__(self, ctx: DomainCtx, d: int, points):
        points = np.asarray(points, dtype=np.int64).reshape(-1, d)
        if len(points) and (points.min() < 0 or points.max() >= ctx.q):
            raise InvalidParamsError("point coordinate outside [0, q)")
        self.ctx = ctx
        self.d = d
        self.points = np.unique(points, axis=0) if len(points) else points
        self._indicator = None

    @property
    def size(self) -> int:
        return len(self.points)

    def __len__(self):
        return self.size

    def __eq__(self, other):
        return (
            isinstance(other, PointSet)
            and self.ctx == other.ctx
            and self.d == other.d
            and self.points.shape == other.points.shape
            and bool((self.points == other.points).all())
        )

    def indicator(self) -> GridFn:
        if self._indicator is None:
            self._indicator = grid_from_points(self.ctx, self.d, self.points)
        return self._indicator

    def translated(self, z) -> "PointSet":
        shifted = np.column_stack(
            [np.asarray(self.ctx.add(self.points[:, c], int(z[c]))) for c in range(self.d)]
        )
        return PointSet(self.ctx, self.d, shifted)


@dataclass
class CountReport:
    spec: StarSpec
    count: int
    method: str
    main_term: Fraction
    ratio: float
    relative_deviation: float
    residual: float | None = None


@dataclass
class DecompReport:
    spec: StarSpec
    count: int
    count_method: str
    main_term: Fraction
    remainders: list  # R_j for j = 0..k-1 (j = number of zero frequencies)
    binomials: list
    reconstruction: float
    residual: float
    measured_constant: float
    imag_residue: float


# ----------------------------------------------------------------------
# Shared helpers
# ----------------------------------------------------------------------

def _require_same_space(e: PointSet, spec: StarSpec):
    if e.ctx != spec.ctx or e.d != spec.d:
        raise ShapeMismatchError("point set and star spec live on different spaces")


def _arith_tables(ctx: DomainCtx):
    """(sq_sub, add_tab) int32 code tables driving the counting kernels."""
    def build():
        q = ctx.q
        if q * q > 1 << 24:
            raise SizeTooLargeError(f"kernel tables need q^2 <= 2^24, got q = {q}")
        codes = np.arange(q, dtype=np.int64)
        sq_sub = np.asarray(ctx.square(ctx.sub(codes[:, None], codes[None, :])))
        add_tab = np.asarray(ctx.add(codes[:, None], codes[None, :]))
        return (
            np.ascontiguousarray(sq_sub, dtype=np.int32),
            np.ascontiguousarray(add_tab, dtype=np.int32),
        )

    return ctx.cached(("arith_tables",), build)


def _kernel_points(e: PointSet) -> np.ndarray:
    return np.ascontiguousarray(e.points, dtype=np.int32)


def main_term(e: PointSet, spec: StarSpec) -> Fraction:
    """M = |E|^{k+1} * prod_i |S_{t_i}| / q^d, exactly."""
    sizes = sphere_sizes(spec.ctx, spec.d)
    num = e.size ** (spec.k + 1)
    for t in spec.t_values:
        num *= int(sizes[t])
    return Fraction(num, (spec.ctx.q**spec.d) ** spec.k)


def measured_constant(spec: StarSpec, set_size: int, count: int, main: Fraction) -> float:
    """|count - M| scaled by the remainder envelope q^(e-k) |E|^k, where e
    is (d+1)/2 for fields and (d(2l-1)+1)/(2l) for rings."""
    if set_size == 0:
        return float("nan")
    ctx, d, k = spec.ctx, spec.d, spec.k
    if ctx.kind == RESIDUE_RING:
        ell = ctx.exponent
        expo = (d * (2 * ell - 1) + 1) / (2 * ell) - k
    else:
        expo = (d + 1) / 2 - k
    envelope = float(ctx.q) ** expo * float(set_size) ** k
    return abs(float(Fraction(count) - main)) / envelope


def _report(e, spec, count, method, residual=None) -> CountReport:
    main = main_term(e, spec)
    if main == 0:
        ratio = float("nan")
        dev = float("nan") if count else 0.0
    else:
        ratio = float(Fraction(count) / main)
        dev = abs(float((Fraction(count) - main) / main))
    return CountReport(
        spec=spec, count=count, method=method, main_term=main,
        ratio=ratio, relative_deviation=dev, residual=residual,
    )


def _product_sum(columns, bound: int) -> int:
    """sum over rows of the product across `columns`; escalates from int64
    to Python ints when the bound on the total crosses 2^62."""
    if not len(columns[0]):
        return 0
    if bound < _INT64_SAFE:
        prod = columns[0].astype(np.int64).copy()
        for col in columns[1:]:
            prod *= col
        return int(prod.sum(dtype=np.int64))
    total = 0
    for row in zip(*columns):
        p = 1
        for v in row:
            p *= int(v)
        total += p
    return total


# ----------------------------------------------------------------------
# The three counting methods
# ----------------------------------------------------------------------

def count_stars_brute(e: PointSet, spec: StarSpec, budget=None) -> CountReport:
    """Exact count by the full (k+1)-fold loop."""
    _require_same_space(e, spec)
    est = e.size ** (spec.k + 1)
    check_budget(est, "brute star count", budget)
    if est > _INT64_SAFE:
        raise BudgetExceededError("brute star count (64-bit kernel)", est, _INT64_SAFE)
    sq_sub, add_tab = _arith_tables(e.ctx)
    tvals = np.asarray(spec.t_values, dtype=np.int32)
    count = _kernels.brute_count(_kernel_points(e), tvals, sq_sub, add_tab)
    return _report(e, spec, count, "brute")


def count_stars_pinned(e: PointSet, spec: StarSpec, budget=None) -> CountReport:
    """Exact count via per-hub neighbor counts: sum_x prod_i n_{t_i}(x)."""
    _require_same_space(e, spec)
    n, k = e.size, spec.k
    check_budget(n * n + n * k, "pinned star count", budget)
    distinct = list(dict.fromkeys(spec.t_values))
    slot = [distinct.index(t) for t in spec.t_values]
    sq_sub, add_tab = _arith_tables(e.ctx)
    counts = _kernels.neighbor_counts(
        _kernel_points(e), np.asarray(distinct, dtype=np.int32), sq_sub, add_tab
    )
    columns = [counts[:, s] for s in slot]
    count = _product_sum(columns, n ** (k + 1)) if n else 0
    return _report(e, spec, count, "pinned")


def count_stars_spectral(e: PointSet, spec: StarSpec, budget=None) -> CountReport:
    """Exact count via one convolution per distinct distance:
    sum_x E(x) prod_i (E * S_{t_i})(x), rounded with a recorded residual."""
    _require_same_space(e, spec)
    ctx, d, k = e.ctx, e.d, spec.k
    q = ctx.q
    distinct = list(dict.fromkeys(spec.t_values))
    est = (2 * len(distinct) + 1) * d * float(q) ** (d + 1) + e.size
    check_budget(est, "spectral star count", budget)
    if e.size == 0:
        return _report(e, spec, 0, "spectral", residual=0.0)
    egrid = e.indicator()
    convs = {}
    residual = 0.0
    for t in distinct:
        conv = convolve(egrid, sphere_indicator(ctx, d, t))
        convs[t] = conv
        residual = max(residual, conv.residual or 0.0)
    idx = tuple(e.points.T)
    columns = [convs[t].values[idx] for t in spec.t_values]
    count = _product_sum(columns, e.size ** (k + 1))
    if residual > 1e-6 * (1 + count):
        raise RoundingResidualError(
            f"spectral residual {residual:.3g} exceeds 1e-6*(1+count)"
        )
    return _report(e, spec, count, "spectral", residual=residual)


# ----------------------------------------------------------------------
# Frequency-space decomposition
# ----------------------------------------------------------------------

def _restricted_sum(ctx, d, eneg, a_list):
    """sum over tuples of nonzero frequencies (m_1..m_r) of
    eneg(m_1 + ... + m_r) * prod_i a_i(m_i), by literal summation; eneg is
    pre-shifted by the caller's accumulated frequency."""
    if len(a_list) == 1:
        return complex(eneg.reshape(-1) @ a_list[0].reshape(-1))
    total = 0.0 + 0.0j
    flat = a_list[0].reshape(-1)
    coords = flat_coords(ctx, d)
    for mi in np.flatnonzero(flat != 0):
        z = np.asarray(ctx.neg(coords[mi]))
        shifted = translate(ctx, d, eneg, z)  # shifted[s] = eneg[s + m]
        total += flat[mi] * _restricted_sum(ctx, d, shifted, a_list[1:])
    return total


def decompose(e: PointSet, spec: StarSpec, budget=None) -> DecompReport:
    """Split the star count as M + sum_j C(k,j) R_j where R_j collects the
    frequency tuples with exactly j zero entries, each computed by direct
    summation.  For a constant distance vector every same-j tuple subset
    contributes identically (the symmetric case); for mixed vectors R_j is
    the binomial-averaged subset sum, so the reconstruction identity holds
    for any T."""
    _require_same_space(e, spec)
    ctx, d, k = e.ctx, e.d, spec.k
    q = ctx.q
    check_budget(float(q**d + 1) ** k, "frequency-space decomposition", budget,
                 DECOMP_DEFAULT_BUDGET)

    ehat = dft_forward(e.indicator()).values
    zero_e = exact_zero_frequencies(ctx, d, e.points)
    if zero_e is not None:
        ehat = np.where(zero_e, 0.0, ehat)
    eneg = negation_view(ctx, d, ehat)

    sizes = sphere_sizes(ctx, d)
    qd = Fraction(q) ** d
    a_grids, s0 = {}, {}
    for t in dict.fromkeys(spec.t_values):
        shat = dft_forward(sphere_indicator(ctx, d, t)).values
        spts = np.argwhere(norm_grid(ctx, d) == t)
        zero_s = exact_zero_frequencies(ctx, d, spts)
        if zero_s is not None:
            shat = np.where(zero_s, 0.0, shat)
        a = ehat * shat
        a[(0,) * d] = 0.0
        a_grids[t] = a
        s0[t] = Fraction(int(sizes[t]), int(qd))

    e0 = Fraction(e.size, int(qd))
    scale = qd ** (k + 1)
    main = main_term(e, spec)

    term_by_j = [0.0 + 0.0j for _ in range(k)]
    for zero_slots in itertools.chain.from_iterable(
        itertools.combinations(range(k), j) for j in range(k)
    ):
        j = len(zero_slots)
        live = [i for i in range(k) if i not in zero_slots]
        factor = Fraction(1)
        for i in zero_slots:
            factor *= e0 * s0[spec.t_values[i]]
        s = _restricted_sum(ctx, d, eneg, [a_grids[spec.t_values[i]] for i in live])
        term_by_j[j] += float(scale * factor) * s

    remainders = [term_by_j[j].real / comb(k, j) for j in range(k)]
    imag = max((abs(t.imag) for t in term_by_j), default=0.0)
    reconstruction = float(main) + sum(t.real for t in term_by_j)

    # an exact count to verify the identity against
    if e.size * e.size <= current_budget(budget):
        rep = count_stars_pinned(e, spec, budget)
    else:
        rep = count_stars_spectral(e, spec, budget)

    return DecompReport(
        spec=spec,
        count=rep.count,
        count_method=rep.method,
        main_term=main,
        remainders=remainders,
        binomials=[comb(k, j) for j in range(k)],
        reconstruction=reconstruction,
        residual=abs(rep.count - reconstruction),
        measured_constant=measured_constant(spec, e.size, rep.count, main),
        imag_residue=imag,
    )


# ----------------------------------------------------------------------
# Distance sets, pinned averages, star sets
# ----------------------------------------------------------------------

def distance_set(e: PointSet, budget=None) -> np.ndarray:
    """Sorted element codes of {||x - y|| : x, y in E}."""
    n = e.size
    check_budget(n * n, "distance set", budget)
    if n == 0:
        return np.empty(0, dtype=np.int64)
    sq_sub, add_tab = _arith_tables(e.ctx)
    pts = _kernel_points(e)
    seen = np.zeros(e.ctx.q, dtype=bool)
    step = max(1, (1 << 21) // max(1, n))
    for i0 in range(0, n, step):
        block = _kernels.pairwise_block(pts[i0 : i0 + step], pts, sq_sub, add_tab)
        seen[np.unique(block)] = True
        if seen.all():
            break
    return np.flatnonzero(seen).astype(np.int64)


def pinned_volume_average(e: PointSet, k: int, budget=None) -> Fraction:
    """Average over all k-tuples of pins of the number of distinct
    distance vectors (||x - pin_1||, ..., ||x - pin_k||) as x runs over E."""
    if k < 1:
        raise InvalidParamsError("k must be >= 1")
    n = e.size
    if n == 0:
        raise InvalidParamsError("pinned average of an empty set")
    check_budget(n ** (k + 1), "pinned volume average", budget)
    q = e.ctx.q
    if k > 1 and q**k >= _INT64_SAFE:
        raise SizeTooLargeError("q^k too large to pack distance vectors")
    sq_sub, add_tab = _arith_tables(e.ctx)
    pts = _kernel_points(e)

    def unique_per_column(mat) -> np.ndarray:
        s = np.sort(mat, axis=0)
        return 1 + (np.diff(s, axis=0) != 0).sum(axis=0)

    if k == 1:
        total = 0
        step = max(1, (1 << 21) // max(1, n))
        for i0 in range(0, n, step):
            block = _kernels.pairwise_block(pts[i0 : i0 + step], pts, sq_sub, add_tab)
            total += int(unique_per_column(block.T).sum())
        return Fraction(total, n)

    dmat = _kernels.pairwise_block(pts, pts, sq_sub, add_tab).astype(np.int64)
    total = 0
    for prefix in itertools.product(range(n), repeat=k - 1):
        packed = np.zeros(n, dtype=np.int64)
        for j in prefix:
            packed = packed * q + dmat[:, j]
        batch = packed[:, None] * q + dmat  # all choices of the last pin
        total += int(unique_per_column(batch).sum())
    return Fraction(total, n**k)


@dataclass
class StarSet:
    """The set of realized k-star distance vectors, as a dense bitset over
    G^k in mixed radix (t_1 most significant)."""

    ctx: DomainCtx
    k: int
    bits: np.ndarray
    cardinality: int

    def contains(self, vector) -> bool:
        idx = 0
        for t in vector:
            idx = idx * self.ctx.q + self.ctx.validate_element(t)
        return bool(self.bits[idx])

    def proportion(self) -> float:
        return self.cardinality / float(self.ctx.q**self.k)


def star_set(e: PointSet, k: int, budget=None) -> StarSet:
    """All distance vectors of k-stars with every vertex in E, computed as
    the union over hubs x of the k-th Cartesian power of D_x = {||x - y||}."""
    if k < 1:
        raise InvalidParamsError("k must be >= 1")
    n = e.size
    q = e.ctx.q
    check_budget(float(q) ** k, "star-set bitset", budget, STARSET_SPACE_BUDGET)
    check_budget(n * n, "star-set distance scan", budget)
    bits = np.zeros(q**k, dtype=bool)
    if n == 0:
        return StarSet(e.ctx, k, bits, 0)
    sq_sub, add_tab = _arith_tables(e.ctx)
    pts = _kernel_points(e)
    seen_profiles = set()
    marks = 0
    mark_limit = current_budget(budget)
    step = max(1, (1 << 21) // max(1, n))
    for i0 in range(0, n, step):
        block = _kernels.pairwise_block(pts[i0 : i0 + step], pts, sq_sub, add_tab)
        for row in block:
            dvals = np.unique(row).astype(np.int64)
            key = dvals.tobytes()
            if key in seen_profiles:
                continue
            seen_profiles.add(key)
            idx = dvals
            for _ in range(k - 1):
                idx = (idx[:, None] * q + dvals[None, :]).reshape(-1)
            marks += len(idx)
            if marks > mark_limit:
                raise BudgetExceededError("star-set marking", float(marks), float(mark_limit))
            bits[idx] = True
    return StarSet(e.ctx, k, bits, int(bits.sum()))
