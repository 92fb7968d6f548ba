"""Exception taxonomy shared across the package.

The CLI maps these onto exit codes: parameter, capacity and parse errors
give exit 2, eigensolver failures give exit 3.
"""

from __future__ import annotations


class SiglapError(Exception):
    """Base class for package-specific errors."""


class ParameterError(SiglapError, ValueError):
    """A parameter lies outside an operation's documented domain."""


class CapacityError(SiglapError):
    """A hard size limit (vertex capacity, brute-force order cap) was exceeded."""


class ConnectivityError(SiglapError):
    """An operation that requires a connected graph received a disconnected one."""


class Graph6Error(SiglapError, ValueError):
    """Malformed graph6 text. Carries the byte offset of the first bad byte."""

    def __init__(self, message: str, offset: int | None = None):
        if offset is not None:
            message = f"{message} (byte offset {offset})"
        super().__init__(message)
        self.offset = offset


class EquitabilityError(SiglapError):
    """A vertex partition is not equitable; the message names a violating pair."""


class SolverError(SiglapError):
    """The eigensolver failed to converge or to certify the requested accuracy."""


class BracketError(SiglapError):
    """The endpoints handed to a bisection do not bracket a sign change."""
