"""Spheres S_t = {x in G^d : x_1^2 + ... + x_d^2 = t}: enumeration,
exact cardinalities, Fourier data, and verification of the decay bounds

    fields:  max_{m != 0} |Shat_t(m)| <= 2 q^{-(d+1)/2}        (t != 0)
    rings:   max_{m != 0} |Shat_t(m)| <= l(l+1) q^{-(d+2l-1)/(2l)}  (t a unit)

Enumeration is a full scan of the norm grid; the closed-form point count
over prime fields serves as the independent oracle for cardinalities.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .domain import PRIME_FIELD, RESIDUE_RING, DomainCtx
from .errors import InvalidParamsError, UnsupportedDomainError, check_budget
from .spectral import GridFn, Spectrum, dft_forward, grid_shape

IMAG_TOL = 1e-9
VIOLATION_TOL = 1e-9


def norm_grid(ctx: DomainCtx, d: int) -> np.ndarray:
    """Grid of ||x|| over all of G^d, cached per (ctx, d)."""
    def build():
        sq = np.asarray(ctx.square(np.arange(ctx.q, dtype=np.int64)))
        total = np.zeros((), dtype=np.int64)
        for _ in range(d):
            total = np.asarray(ctx.add(total[..., None], sq))
        total.setflags(write=False)
        return total

    return ctx.cached(("norm_grid", d), build)


def sphere_sizes(ctx: DomainCtx, d: int) -> np.ndarray:
    """|S_t| for every t at once (a bincount of the norm grid)."""
    def build():
        sizes = np.bincount(norm_grid(ctx, d).reshape(-1), minlength=ctx.q)
        sizes.setflags(write=False)
        return sizes

    return ctx.cached(("sphere_sizes", d), build)


@dataclass
class SphereTable:
    ctx: DomainCtx
    d: int
    t: int
    points: np.ndarray  # (N, d) element codes
    cardinality: int
    spectrum: Spectrum | None = None
    max_nonzero_fourier: float | None = None
    argmax_m: tuple | None = None
    imag_residue: float | None = None


@dataclass
class BoundReport:
    domain: str
    q: int
    ell: int  # ring exponent, 0 for fields
    d: int
    t: int
    cardinality: int
    max_nonzero_fourier: float
    argmax_m: tuple
    bound: float
    ratio: float
    in_hypothesis: bool
    violation: bool
    imag_residue: float


def sphere_indicator(ctx: DomainCtx, d: int, t: int) -> GridFn:
    t = ctx.validate_element(t)
    values = (norm_grid(ctx, d) == t).astype(np.int64)
    return GridFn(ctx, d, values)


def enumerate_sphere(
    ctx: DomainCtx, d: int, t: int, with_spectrum: bool = False, budget=None
) -> SphereTable:
    """Exact point list of S_t by full scan of G^d; optionally attaches
    the Fourier data (transform, max nonzero magnitude and its argmax)."""
    if d < 1:
        raise InvalidParamsError("dimension must be >= 1")
    t = ctx.validate_element(t)
    check_budget(float(ctx.q) ** d, f"sphere scan over {ctx.descriptor}^{d}", budget)
    mask = norm_grid(ctx, d) == t
    points = np.ascontiguousarray(np.argwhere(mask), dtype=np.int64)
    table = SphereTable(ctx, d, t, points, int(mask.sum()))
    if with_spectrum:
        spec = dft_forward(GridFn(ctx, d, mask.astype(np.int64)))
        imag = float(np.abs(spec.values.imag).max())
        mags = np.abs(spec.values)
        mags[(0,) * d] = -1.0  # exclude the zero frequency from the max
        flat_arg = int(mags.argmax())
        table.spectrum = spec
        table.max_nonzero_fourier = float(mags.reshape(-1)[flat_arg])
        table.argmax_m = tuple(np.unravel_index(flat_arg, grid_shape(ctx, d)))
        table.imag_residue = imag
    return table


def sphere_count_oracle(ctx: DomainCtx, d: int, t: int) -> int:
    """Closed-form |S_t| for prime fields, t != 0: the classical count for
    the quadratic form x_1^2+...+x_d^2 taking value t, driven by the
    quadratic character eta.

        d odd:  q^{d-1} + q^{(d-1)/2} * eta((-1)^{(d-1)/2} t)
        d even: q^{d-1} - q^{(d-2)/2} * eta((-1)^{d/2})
    """
    if ctx.kind != PRIME_FIELD:
        raise UnsupportedDomainError("closed-form sphere count needs a prime field")
    t = ctx.validate_element(t)
    if t == 0:
        raise InvalidParamsError("closed-form sphere count requires t != 0")
    q = ctx.q

    def eta(a: int) -> int:
        a %= q
        assert a != 0
        return 1 if pow(a, (q - 1) // 2, q) == 1 else -1

    if d % 2 == 1:
        sign = eta(pow(-1, (d - 1) // 2, q) * t % q)
        return q ** (d - 1) + q ** ((d - 1) // 2) * sign
    sign = eta(pow(-1, d // 2, q))
    return q ** (d - 1) - q ** ((d - 2) // 2) * sign


def fourier_bound(ctx: DomainCtx, d: int) -> float:
    """The applicable decay bound for Shat_t at nonzero frequencies."""
    q = float(ctx.q)
    if ctx.kind == RESIDUE_RING:
        ell = ctx.exponent
        return ell * (ell + 1) * q ** (-(d + 2 * ell - 1) / (2 * ell))
    return 2.0 * q ** (-(d + 1) / 2)


def verify_sphere_bound(ctx: DomainCtx, d: int, t: int, budget=None) -> BoundReport:
    table = enumerate_sphere(ctx, d, t, with_spectrum=True, budget=budget)
    bound = fourier_bound(ctx, d)
    ratio = table.max_nonzero_fourier / bound
    if ctx.kind == RESIDUE_RING:
        in_hyp = bool(ctx.is_unit_mask(t))
    else:
        in_hyp = t != 0
    return BoundReport(
        domain=ctx.descriptor,
        q=ctx.q,
        ell=ctx.exponent if ctx.kind == RESIDUE_RING else 0,
        d=d,
        t=t,
        cardinality=table.cardinality,
        max_nonzero_fourier=table.max_nonzero_fourier,
        argmax_m=table.argmax_m,
        bound=bound,
        ratio=ratio,
        in_hypothesis=in_hyp,
        violation=bool(in_hyp and ratio > 1.0 + VIOLATION_TOL),
        imag_residue=table.imag_residue,
    )
