"""
Exception hierarchy for detrepy.

Absence of a witness is never an error: operations return ``None`` or a
refutation certificate for that. The classes below cover misuse, resource
bounds and failed internal consistency checks.
"""

from __future__ import annotations

from typing import Optional


class DetrepError(Exception):
    """Base class for all detrepy errors."""


class FieldMismatchError(DetrepError, ValueError):
    """Operands live over different fields."""


class ParseError(DetrepError, ValueError):
    """Malformed textual literal."""

    def __init__(self, message: str, text: str = "", position: int = 0, production: str = ""):
        self.text = text
        self.position = position
        self.production = production
        where = f" at position {position}" if text else ""
        prod = f" (expected {production})" if production else ""
        super().__init__(f"{message}{where}{prod}")


class FactorizationBoundError(DetrepError):
    """Integer factorization would need trial division beyond the configured bound."""

    def __init__(self, value: int, bound: int):
        self.value = value
        self.bound = bound
        super().__init__(f"cannot fully factor {value} with trial division up to {bound}")


class BoundExceededError(DetrepError):
    """A configured search bound is exceeded."""

    def __init__(self, what: str, value: int, bound: int):
        self.what = what
        self.value = value
        self.bound = bound
        super().__init__(f"{what} = {value} exceeds the configured bound {bound}")


class ConditionViolationError(DetrepError):
    """Input to the adjugate reconstruction does not satisfy the factorization conditions."""


class IdentityViolationError(DetrepError, AssertionError):
    """An exact identity that must hold by construction failed."""


class ActionUndefinedError(DetrepError):
    """The group element sends the matrix outside the affine chart (beta = 0)."""


class RetryBudgetExceededError(DetrepError):
    """Generic group element sampling did not find a usable element."""

    def __init__(self, attempts: int, reason: Optional[str] = None):
        self.attempts = attempts
        msg = f"no generic group element found after {attempts} attempts"
        if reason:
            msg = f"{msg}: {reason}"
        super().__init__(msg)
