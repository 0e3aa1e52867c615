"""Error types and the shared operation budget.

Expensive operations estimate their cost up front (in elementary
operations, roughly "table lookups plus integer ops") and refuse to run
past the budget instead of hanging.  The default budget is 1e9 and can be
overridden per call, or globally through the STARCENSUS_BUDGET
environment variable.
"""

import os

DEFAULT_BUDGET = 1_000_000_000
BUDGET_ENV_VAR = "STARCENSUS_BUDGET"


class StarcensusError(Exception):
    """Base class for all errors raised by this package."""


class NonPrimeError(StarcensusError, ValueError):
    """The requested characteristic is not a prime."""


class EvenCharacteristicError(StarcensusError, ValueError):
    """Characteristic 2 is outside the supported geometry."""


class SizeTooLargeError(StarcensusError, ValueError):
    """The requested structure exceeds the table-driven size limits."""


class InvalidElementError(StarcensusError, ValueError):
    """An element code outside [0, q)."""


class InvalidParamsError(StarcensusError, ValueError):
    """Malformed parameters for a generator or plan."""


class UnsupportedDomainError(StarcensusError, TypeError):
    """Operation not defined for this kind of coefficient domain."""


class ShapeMismatchError(StarcensusError, ValueError):
    """Two grids live on different domains or dimensions."""


class SizeExceedsSpaceError(StarcensusError, ValueError):
    """A requested sample is larger than the whole space."""


class RoundingResidualError(StarcensusError, ArithmeticError):
    """An integer-valued result failed to round cleanly."""


class BudgetExceededError(StarcensusError, RuntimeError):
    """Estimated cost of an operation exceeds the operation budget."""

    def __init__(self, what: str, estimate: float, budget: float):
        self.what = what
        self.estimate = estimate
        self.budget = budget
        super().__init__(
            f"{what}: estimated {estimate:.3g} ops exceeds budget {budget:.3g} "
            f"(raise with --budget or {BUDGET_ENV_VAR})"
        )


class ParseError(StarcensusError, ValueError):
    """A point-set file failed to parse; carries the offending line number."""

    def __init__(self, path, line_no: int, message: str):
        self.path = path
        self.line_no = line_no
        super().__init__(f"{path}:{line_no}: {message}")


class DomainMismatchError(StarcensusError, ValueError):
    """A file or argument names a different domain than expected."""


def current_budget(override=None, default: int = DEFAULT_BUDGET) -> int:
    """The operation budget: explicit override, else env var, else default.

    Operations with a tighter documented cap pass it as `default`; the
    environment variable and per-call overrides beat either default.
    """
    if override is not None:
        return int(override)
    env = os.environ.get(BUDGET_ENV_VAR)
    if env:
        return int(float(env))
    return default


def check_budget(estimate: float, what: str, budget=None, default: int = DEFAULT_BUDGET) -> None:
    limit = current_budget(budget, default)
    if estimate > limit:
        raise BudgetExceededError(what, float(estimate), float(limit))
