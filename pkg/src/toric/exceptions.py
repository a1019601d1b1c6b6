"""
Errors raised by the toric library.

Every error carries an ``exit_code`` that the management commands hand to
``CommandError``:
  2: the input document or complex is invalid
  3: a classification precondition does not hold
  4: an internal consistency check failed
"""

from __future__ import annotations
from dataclasses import dataclass, field
from typing import Any


class ToricError(Exception):
    exit_code = 4

    def __init__(self, message: str = "", **details: Any):
        super().__init__(message)
        self.message = message
        self.details = details


# -- validation (exit code 2) ------------------------------------------------

class ValidationError(ToricError):
    exit_code = 2


class DocumentError(ValidationError):
    """Malformed JSON document; ``field`` names the offending JSON path."""


class ContainmentViolation(ValidationError):
    pass


class SpanMismatch(ValidationError):
    pass


class NotAFacet(ValidationError):
    pass


class NotSimplicial(ValidationError):
    pass


class BoundaryError(ValidationError):
    """Boundary entry on a cone that is not a smooth invariant prime."""


@dataclass(frozen=True)
class Violation:
    code: str
    message: str
    cones: tuple[str, ...] = field(default_factory=tuple)

    def as_dict(self) -> dict:
        return {"code": self.code, "message": self.message, "cones": list(self.cones)}


class InvalidComplex(ValidationError):
    def __init__(self, violations: list[Violation]):
        codes = ", ".join(sorted({v.code for v in violations}))
        super().__init__(f"invalid monoidal complex: {codes}")
        self.violations = violations


# -- preconditions (exit code 3) ---------------------------------------------

class PreconditionFailed(ToricError):
    exit_code = 3


class NotIrreducible(PreconditionFailed):
    pass


class Infeasible(PreconditionFailed):
    """The log discrepancy system has no rational solution."""

    def __init__(self, message: str, certificate: list):
        super().__init__(message)
        self.certificate = certificate


class NotWlc(PreconditionFailed):
    pass


class NotOrientable(PreconditionFailed):
    pass


class GlueCheckFailed(PreconditionFailed):
    pass


class NotNormalComponents(PreconditionFailed):
    pass


class NotAnLcCenter(PreconditionFailed):
    pass


# -- internal consistency (exit code 4) --------------------------------------

class ConsistencyError(ToricError):
    exit_code = 4


class InconsistentDifferent(ConsistencyError):
    pass


class NoUnitPairing(ConsistencyError):
    pass


class SearchExhausted(ConsistencyError):
    pass
