"""Point-set files.

Text format, diffable and language-neutral:

    # optional comments
    domain=F3^2 d=2
    0,1
    2,0

Line 1 (after comments) is the header; every following non-comment line
is one point as comma-separated element codes.  Duplicate points load
fine but are deduplicated with a warning carrying the count.
"""

from __future__ import annotations

import warnings

import numpy as np

from ..domain import DomainCtx, parse_domain
from ..errors import DomainMismatchError, InvalidParamsError, ParseError
from ..stars import PointSet


def save_set(e: PointSet, path) -> None:
    with open(path, "w") as fh:
        fh.write(f"domain={e.ctx.descriptor} d={e.d}\n")
        for point in e.points:
            fh.write(",".join(str(int(c)) for c in point) + "\n")


def load_set(path, expect_ctx: DomainCtx | None = None, expect_d: int | None = None) -> PointSet:
    ctx = None
    d = None
    rows = []
    with open(path) as fh:
        for line_no, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if ctx is None:
                ctx, d = _parse_header(path, line_no, line)
                continue
            parts = line.split(",")
            if len(parts) != d:
                raise ParseError(path, line_no, f"expected {d} coordinates, got {len(parts)}")
            try:
                point = [int(p) for p in parts]
            except ValueError:
                raise ParseError(path, line_no, f"non-integer coordinate in {line!r}") from None
            for c in point:
                if not 0 <= c < ctx.q:
                    raise ParseError(path, line_no, f"coordinate {c} outside [0, {ctx.q})")
            rows.append(point)
    if ctx is None:
        raise ParseError(path, 0, "missing header line 'domain=<descriptor> d=<d>'")
    if expect_ctx is not None and ctx != expect_ctx:
        raise DomainMismatchError(
            f"{path} holds a {ctx.descriptor} set, expected {expect_ctx.descriptor}"
        )
    if expect_d is not None and d != expect_d:
        raise DomainMismatchError(f"{path} has d={d}, expected d={expect_d}")
    points = np.asarray(rows, dtype=np.int64).reshape(-1, d)
    e = PointSet(ctx, d, points)
    dupes = len(points) - e.size
    if dupes:
        warnings.warn(f"{path}: dropped {dupes} duplicate point(s)")
    return e


def _parse_header(path, line_no, line):
    fields = dict(
        part.split("=", 1) for part in line.split() if "=" in part
    )
    if set(fields) != {"domain", "d"}:
        raise ParseError(path, line_no, f"bad header {line!r}")
    try:
        ctx = parse_domain(fields["domain"])
    except InvalidParamsError as exc:
        raise ParseError(path, line_no, str(exc)) from None
    try:
        d = int(fields["d"])
    except ValueError:
        raise ParseError(path, line_no, f"bad dimension {fields['d']!r}") from None
    if d < 1:
        raise ParseError(path, line_no, "dimension must be >= 1")
    return ctx, d
