"""Shared exception base classes.

Stage-specific exceptions live next to the code that raises them; they all
derive from :class:`A11yBenchError` so the CLI can map error classes to
distinct exit codes.
"""

from __future__ import annotations


class A11yBenchError(Exception):
    """Base class for all harness errors."""

    exit_code = 4


class MissingFile(A11yBenchError):
    """A required input file does not exist or is unreadable."""


class ConfigInvalid(A11yBenchError):
    """Run configuration failed validation."""

    exit_code = 2


class MissingStageInput(A11yBenchError):
    """A stage was invoked before its upstream artifacts exist."""

    exit_code = 3
