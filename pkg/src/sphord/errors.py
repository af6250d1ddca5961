"""Exception hierarchy and the shared enumeration budget."""

from __future__ import annotations

import os

DEFAULT_BUDGET = 10**8


def default_budget() -> int:
    """Operation-count budget, overridable through ``SPHORD_BUDGET``."""
    raw = os.environ.get("SPHORD_BUDGET")
    if raw is None:
        return DEFAULT_BUDGET
    try:
        value = int(raw)
    except ValueError:
        raise SphordError(f"SPHORD_BUDGET must be an integer, got {raw!r}") from None
    if value <= 0:
        raise SphordError("SPHORD_BUDGET must be positive")
    return value


class SphordError(Exception):
    """Base class. ``code`` is the machine-readable tag used by the CLI."""

    code = "error"


class ArityError(SphordError, ValueError):
    code = "arity"


class DomainError(SphordError, ValueError):
    code = "domain"


class BudgetExceeded(SphordError):
    code = "budget_exceeded"

    def __init__(self, needed: int, budget: int, what: str = "operation"):
        super().__init__(f"{what} needs ~{needed} steps, budget is {budget}")
        self.needed = needed
        self.budget = budget


class NoWitness(SphordError):
    """No density witness among the candidate positions."""

    code = "no_witness"


class SearchExhausted(SphordError):
    code = "search_exhausted"

    def __init__(self, bound: int, detail: str = ""):
        msg = f"no extension found within the first {bound} candidates"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)
        self.bound = bound


class ParseError(SphordError, ValueError):
    code = "syntax"

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class UnboundVariable(SphordError, KeyError):
    code = "unbound_variable"

    def __str__(self) -> str:
        return Exception.__str__(self)


class SpectrumError(SphordError, ValueError):
    code = "invalid_spectrum"


class FormulaError(SphordError, ValueError):
    """A formula of the wrong shape for the requested operation."""

    code = "formula"
