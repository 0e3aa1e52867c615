"""Point-set sources: seeded uniform samples and structured families
(submodules, sphere subsets, coordinate slabs) used as adversarial
inputs for the sweeps."""

from __future__ import annotations

import itertools

import numpy as np

from ..domain import DomainCtx
from ..errors import InvalidParamsError, SizeExceedsSpaceError, check_budget
from ..rng import partial_shuffle_prefix
from ..spectral import flat_coords
from ..spheres import enumerate_sphere
from ..stars import PointSet

STRUCTURED_KINDS = ("subspace", "sphere-subset", "coordinate-slab")


def sample_random_set(ctx: DomainCtx, d: int, size: int, seed: int) -> PointSet:
    """Uniform size-subset of G^d via a seeded partial shuffle of the flat
    point enumeration.  Same seed, larger size gives a superset."""
    total = ctx.q**d
    if size > total:
        raise SizeExceedsSpaceError(f"size {size} > |G^d| = {total}")
    check_budget(total + size, "random set sample")
    chosen = partial_shuffle_prefix(total, size, seed)
    return PointSet(ctx, d, flat_coords(ctx, d)[chosen])


def structured_set(ctx: DomainCtx, d: int, kind: str, params) -> PointSet:
    """Deterministic structured families.

    subspace        params: iterable of spanning vectors (length-d tuples);
                    the set of all G-linear combinations.
    sphere-subset   params: (t, fraction, seed); the first ceil(fraction *
                    |S_t|) points of a seeded shuffle of S_t.
    coordinate-slab params: widths (w_1..w_d); the box prod [0, w_i).
    """
    if kind == "subspace":
        vectors = np.asarray(params, dtype=np.int64).reshape(-1, d)
        if len(vectors) == 0:
            raise InvalidParamsError("subspace needs at least one spanning vector")
        m = len(vectors)
        check_budget(float(ctx.q) ** m * d, "subspace enumeration")
        combos = []
        for coeffs in itertools.product(range(ctx.q), repeat=m):
            point = np.zeros(d, dtype=np.int64)
            for c, v in zip(coeffs, vectors):
                point = np.asarray(ctx.add(point, ctx.mul(c, v)))
            combos.append(point)
        return PointSet(ctx, d, np.asarray(combos))

    if kind == "sphere-subset":
        t, fraction, seed = params
        if not 0.0 <= float(fraction) <= 1.0:
            raise InvalidParamsError(f"fraction {fraction} outside [0, 1]")
        sphere = enumerate_sphere(ctx, d, int(t))
        take = int(np.ceil(float(fraction) * sphere.cardinality))
        chosen = partial_shuffle_prefix(sphere.cardinality, take, int(seed))
        return PointSet(ctx, d, sphere.points[chosen])

    if kind == "coordinate-slab":
        widths = [int(w) for w in params]
        if len(widths) != d:
            raise InvalidParamsError(f"need {d} widths, got {len(widths)}")
        if any(not 1 <= w <= ctx.q for w in widths):
            raise InvalidParamsError("widths must lie in [1, q]")
        size = int(np.prod(widths))
        check_budget(size * d, "slab enumeration")
        grids = np.meshgrid(*[np.arange(w) for w in widths], indexing="ij")
        return PointSet(ctx, d, np.stack([g.reshape(-1) for g in grids], axis=1))

    raise InvalidParamsError(f"unknown structured kind {kind!r} (choose from {STRUCTURED_KINDS})")


def parse_structured_arg(ctx: DomainCtx, d: int, text: str) -> PointSet:
    """CLI grammar: KIND:PARAMS with
       subspace:1,0,0;0,1,0        vectors ';'-separated
       sphere-subset:t=1,fraction=0.5,seed=7
       coordinate-slab:2,5,5
    """
    kind, _, body = text.partition(":")
    kind = kind.strip()
    if kind == "subspace":
        vectors = [
            [int(c) for c in vec.split(",")] for vec in body.split(";") if vec.strip()
        ]
        return structured_set(ctx, d, kind, vectors)
    if kind == "sphere-subset":
        fields = {}
        for part in body.split(","):
            key, _, val = part.partition("=")
            fields[key.strip()] = val.strip()
        try:
            params = (int(fields["t"]), float(fields.get("fraction", 1.0)), int(fields.get("seed", 0)))
        except (KeyError, ValueError) as exc:
            raise InvalidParamsError(f"bad sphere-subset params {body!r}: {exc}") from None
        return structured_set(ctx, d, kind, params)
    if kind == "coordinate-slab":
        try:
            widths = [int(w) for w in body.split(",")]
        except ValueError:
            raise InvalidParamsError(f"bad slab widths {body!r}") from None
        return structured_set(ctx, d, kind, widths)
    raise InvalidParamsError(f"unknown structured kind {kind!r} (choose from {STRUCTURED_KINDS})")
