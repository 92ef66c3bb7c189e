"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class TavisCPAError(Exception):
    """Base class for all package errors."""


class DomainError(TavisCPAError, ValueError):
    """Input outside the mathematical domain of a conversion (e.g. r12 = 0)."""


class ValidationError(TavisCPAError, ValueError):
    """Parameters violate one or more model invariants.

    The individual findings are kept in ``diagnostics``.
    """

    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        text = "; ".join(f"{d.field}: {d.message}" for d in self.diagnostics)
        super().__init__(f"invalid parameters ({text})")


class PreconditionError(TavisCPAError, ValueError):
    """An operation was called outside the parameter regime it is defined for."""


class SingularSystemError(TavisCPAError, ArithmeticError):
    """The steady-state linear system is (numerically) singular."""


class DegenerateAngleError(TavisCPAError, ArithmeticError):
    """Mixing angle undefined: zero coupling on exact resonance."""


class IntegrationError(TavisCPAError, RuntimeError):
    """Time stepping failed; ``last_state`` holds the last accepted state."""

    def __init__(self, message, last_state=None):
        super().__init__(message)
        self.last_state = last_state


class InternalError(TavisCPAError, AssertionError):
    """An internal consistency check failed."""
