"""Discrete Fourier analysis on G^d with normalization

    fhat(m) = q^{-d} * sum_x f(x) * conj(chi(x . m))

where x . m is the coordinate dot product in G and chi the domain's
additive character.  Grids are dense (q,)*d arrays indexed by element
codes; the transform applies a precomputed q x q character kernel along
each axis (cost O(d q^{d+1})), which matches the direct double sum and
keeps the structure exact at desk scale.

Integer-valued results (convolutions of indicators) are rounded back to
integers and carry their rounding residual; a residual above 1e-6 is an
error, never silently accepted.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .domain import EXTENSION_FIELD, DomainCtx
from .errors import RoundingResidualError, ShapeMismatchError, SizeTooLargeError, check_budget

ROUNDING_TOL = 1e-6
DIRECT_SUM_DEFAULT_BUDGET = 100_000_000
_KERNEL_MAX_Q = 2048


@dataclass
class GridFn:
    """A dense function on G^d.  Integer dtypes mark exact data (e.g.
    indicators); `residual` records the rounding residual when the values
    were recovered from floating point."""

    ctx: DomainCtx
    d: int
    values: np.ndarray
    residual: float | None = None

    def mass(self):
        return self.values.sum()

    def is_integer_valued(self) -> bool:
        return self.values.dtype.kind in "iub"


@dataclass
class Spectrum:
    """Fourier data of a GridFn, same (q,)*d layout indexed by frequency."""

    ctx: DomainCtx
    d: int
    values: np.ndarray


def grid_shape(ctx: DomainCtx, d: int) -> tuple:
    return (ctx.q,) * d


def grid_from_points(ctx: DomainCtx, d: int, points, dtype=np.int64) -> GridFn:
    """Indicator grid of a point array of shape (N, d)."""
    values = np.zeros(grid_shape(ctx, d), dtype=dtype)
    points = np.asarray(points, dtype=np.int64).reshape(-1, d)
    if len(points):
        values[tuple(points.T)] = 1
    return GridFn(ctx, d, values)


def flat_coords(ctx: DomainCtx, d: int) -> np.ndarray:
    """(q^d, d) array of point coordinates in flat C-order."""
    def build():
        coords = np.indices(grid_shape(ctx, d)).reshape(d, -1).T
        return np.ascontiguousarray(coords, dtype=np.int64)

    return ctx.cached(("flat_coords", d), build)


def _pairing_kernel(ctx: DomainCtx) -> np.ndarray:
    """q x q matrix K[a, b] = chi(a * b)."""
    def build():
        q = ctx.q
        if q > _KERNEL_MAX_Q:
            raise SizeTooLargeError(f"transform kernel needs q <= {_KERNEL_MAX_Q}, got {q}")
        codes = np.arange(q)
        prods = ctx.mul(codes[:, None], codes[None, :])
        k = ctx.char_table[prods]
        k.setflags(write=False)
        return k

    return ctx.cached(("pairing_kernel",), build)


def _apply_axes(kernel: np.ndarray, values: np.ndarray, d: int) -> np.ndarray:
    # Contract the last axis each pass; tensordot prepends the new axis,
    # so d passes transform every axis once and restore the order.
    out = values.astype(np.complex128)
    for _ in range(d):
        out = np.tensordot(kernel, out, axes=(1, d - 1))
    return out


def dft_forward(f: GridFn) -> Spectrum:
    kernel = np.conj(_pairing_kernel(f.ctx))
    vals = _apply_axes(kernel, f.values, f.d)
    vals *= float(f.ctx.q) ** (-f.d)
    return Spectrum(f.ctx, f.d, vals)


def dft_inverse(spec: Spectrum) -> GridFn:
    kernel = _pairing_kernel(spec.ctx)
    vals = _apply_axes(kernel, spec.values, spec.d)
    return GridFn(spec.ctx, spec.d, vals)


def dft_forward_direct(f: GridFn, budget=None) -> Spectrum:
    """Independent O(q^{2d}) oracle: the literal double sum, one frequency
    at a time."""
    ctx, d = f.ctx, f.d
    n = ctx.q**d
    check_budget(float(n) * n * d, "direct transform", budget, DIRECT_SUM_DEFAULT_BUDGET)
    coords = flat_coords(ctx, d)
    flat = f.values.reshape(-1).astype(np.complex128)
    out = np.empty(n, dtype=np.complex128)
    for mi in range(n):
        m = coords[mi]
        pair = np.zeros(n, dtype=np.int64)
        for c in range(d):
            pair = ctx.add(pair, ctx.mul(int(m[c]), coords[:, c]))
        out[mi] = flat @ np.conj(ctx.char_table[pair])
    out /= float(ctx.q) ** d
    return Spectrum(ctx, d, out.reshape(grid_shape(ctx, d)))


# ----------------------------------------------------------------------
# Translation machinery: the additive group of each axis is Z_q for
# prime fields and rings, and (Z_p)^n in base-p digits for extensions,
# so translations are rolls over the digit axes.
# ----------------------------------------------------------------------

def additive_shape(ctx: DomainCtx, d: int) -> tuple:
    if ctx.kind == EXTENSION_FIELD:
        return (ctx.p,) * (ctx.exponent * d)
    return (ctx.q,) * d


def additive_digits(ctx: DomainCtx, z) -> tuple:
    """Per-additive-axis shift amounts for the point z (coords of length d)."""
    if ctx.kind != EXTENSION_FIELD:
        return tuple(int(c) for c in z)
    p, n = ctx.p, ctx.exponent
    digs = []
    for c in z:
        c = int(c)
        digs.extend((c // p**j) % p for j in reversed(range(n)))
    return tuple(digs)


def translate(ctx: DomainCtx, d: int, values: np.ndarray, z) -> np.ndarray:
    """T with T[x] = values[x - z]."""
    shape = additive_shape(ctx, d)
    shifted = np.roll(values.reshape(shape), additive_digits(ctx, z), axis=tuple(range(len(shape))))
    return shifted.reshape(values.shape)


def negation_view(ctx: DomainCtx, d: int, values: np.ndarray) -> np.ndarray:
    """N with N[m] = values[-m]."""
    neg = np.asarray(ctx.neg(np.arange(ctx.q)))
    return values[np.ix_(*([neg] * d))]


# ----------------------------------------------------------------------
# Convolution
# ----------------------------------------------------------------------

def _require_same_space(f: GridFn, g: GridFn):
    if f.ctx != g.ctx or f.d != g.d:
        raise ShapeMismatchError(
            f"grids on {f.ctx.descriptor}^{f.d} vs {g.ctx.descriptor}^{g.d}"
        )


def _round_integer(values: np.ndarray, tol: float = ROUNDING_TOL):
    rounded = np.round(values.real)
    residual = float(np.abs(values - rounded).max()) if values.size else 0.0
    if residual > tol:
        raise RoundingResidualError(
            f"rounding residual {residual:.3g} exceeds {tol:.1g}"
        )
    return rounded.astype(np.int64), residual


def convolve(f: GridFn, g: GridFn) -> GridFn:
    """(f * g)(x) = sum_y f(y) g(x - y), via transform, pointwise product,
    inverse transform.  With this module's normalization the product picks
    up a factor q^d.  Integer inputs come back as exact integers with the
    rounding residual recorded."""
    _require_same_space(f, g)
    fs = dft_forward(f)
    gs = dft_forward(g)
    prod = fs.values * gs.values * (float(f.ctx.q) ** f.d)
    out = dft_inverse(Spectrum(f.ctx, f.d, prod)).values
    if f.is_integer_valued() and g.is_integer_valued():
        ints, residual = _round_integer(out)
        return GridFn(f.ctx, f.d, ints, residual=residual)
    return GridFn(f.ctx, f.d, out)


def convolve_direct(f: GridFn, g: GridFn, budget=None) -> GridFn:
    """Direct-summation convolution, the independent exact oracle."""
    _require_same_space(f, g)
    ctx, d = f.ctx, f.d
    n = ctx.q**d
    check_budget(float(n) * n, "direct convolution", budget, DIRECT_SUM_DEFAULT_BUDGET)
    integer = f.is_integer_valued() and g.is_integer_valued()
    out = np.zeros(grid_shape(ctx, d), dtype=np.int64 if integer else np.complex128)
    coords = flat_coords(ctx, d)
    fflat = f.values.reshape(-1)
    for yi in np.flatnonzero(fflat != 0):
        out += fflat[yi] * translate(ctx, d, g.values, coords[yi])
    return GridFn(ctx, d, out, residual=0.0 if integer else None)


# ----------------------------------------------------------------------
# Exact spectral support: integer histograms of character classes decide
# fhat(m) = 0 without floating point.  A sum of q-th roots of unity with
# integer multiplicities c_j vanishes iff, writing j = a + b*p^(l-1),
# the multiplicities are constant in b for every a.
# ----------------------------------------------------------------------

def exact_zero_frequencies(ctx: DomainCtx, d: int, points, cost_cap: float = 1e8):
    """Boolean grid, True where the indicator transform of `points` is
    exactly zero.  Returns None when the histogram pass would exceed
    cost_cap elementary operations."""
    q, p = ctx.q, ctx.p
    n = q**d
    points = np.asarray(points, dtype=np.int64).reshape(-1, d)
    npts = len(points)
    if npts == 0:
        return np.ones(grid_shape(ctx, d), dtype=bool)
    classes = p if ctx.is_field else q
    if float(npts) * n * d > cost_cap or float(n) * classes > cost_cap:
        return None
    hist = np.zeros(n * classes, dtype=np.int64)
    base = np.arange(n, dtype=np.int64) * classes
    codes = np.arange(q, dtype=np.int64)
    for x in points:
        # pairing grid <x, m> over all m, built by iterated domain addition
        pair = np.zeros((), dtype=np.int64)
        for c in range(d):
            row = np.asarray(ctx.mul(int(x[c]), codes))
            pair = np.asarray(ctx.add(pair[..., None], row))
        cls = ctx.trace_table[pair] if ctx.is_field else pair
        hist += np.bincount(base + cls.reshape(-1), minlength=n * classes)
    if ctx.is_field:
        counts = hist.reshape(n, classes, 1)
    else:
        counts = hist.reshape(n, p, p ** (ctx.exponent - 1))
    zero = (counts.max(axis=1) == counts.min(axis=1)).all(axis=-1)
    return zero.reshape(grid_shape(ctx, d))
