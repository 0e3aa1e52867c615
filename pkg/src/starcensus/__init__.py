"""Counting k-star point configurations over finite fields and residue
rings, with exhaustive verification of the sphere character-sum bounds
that control them."""

from .domain import (
    DomainCtx,
    char_value,
    is_unit,
    make_domain,
    norm_form,
    parse_domain,
)
from .errors import (
    BudgetExceededError,
    DomainMismatchError,
    ParseError,
    RoundingResidualError,
    StarcensusError,
)
from .spectral import GridFn, Spectrum, convolve, convolve_direct, dft_forward, dft_inverse
from .spheres import BoundReport, SphereTable, enumerate_sphere, sphere_count_oracle, verify_sphere_bound
from .stars import (
    CountReport,
    DecompReport,
    PointSet,
    StarSpec,
    count_stars_brute,
    count_stars_pinned,
    count_stars_spectral,
    decompose,
    distance_set,
    pinned_volume_average,
    star_set,
)

__version__ = "0.1.0"
