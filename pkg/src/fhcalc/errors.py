"""Shared exception types.

Guard errors signal a refused computation (size limits, unverified
hypotheses); validation errors signal malformed job input.  The CLI maps
them to distinct exit codes.
"""

from __future__ import annotations


class ComputationGuardError(RuntimeError):
    """A computation was refused because a safety guard tripped."""


class JobValidationError(ValueError):
    """A job description failed schema or semantic validation."""
