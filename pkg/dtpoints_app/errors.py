"""
Exception hierarchy for the dtpoints application.

Library code raises these; only the command-line front end turns them into
exit codes.
"""

from typing import Any


class DTPointsError(Exception):
    """Base class for every error raised by dtpoints."""


class InvalidConstructionError(DTPointsError, ValueError):
    """A value was built from data that violates its invariants."""


class PoleError(DTPointsError, ZeroDivisionError):
    """Division by zero, a non-unit constant term, or evaluation at a pole."""


class VerificationError(DTPointsError):
    """Two routes that must agree did not.

    ``where`` names the first mismatch (a q-degree, a dimension vector, an
    S-value, ...) so the CLI can report it.
    """

    def __init__(self, message: str, where: Any = None):
        super().__init__(message)
        self.where = where


class BudgetExceededError(DTPointsError):
    """A brute-force computation was asked to do more work than allowed."""


class SaddleError(DTPointsError):
    """The saddle-point solver could not bracket or validate its root."""
