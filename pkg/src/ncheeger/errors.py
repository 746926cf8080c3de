"""Exception hierarchy shared by every module."""

from __future__ import annotations


class NCheegerError(Exception):
    """Base class for all errors raised by ncheeger."""


class InputError(NCheegerError, ValueError):
    """Invalid user-supplied data (graphs, domains, functions, files)."""


class DuplicateEdge(InputError):
    pass


class NonPositiveWeight(InputError):
    pass


class DisconnectedGraph(InputError):
    pass


class UnknownVertex(InputError):
    pass


class OmegaTooSmall(InputError):
    pass


class EmptyVertexBoundary(InputError):
    pass


class EmptyOrFullSubset(InputError):
    pass


class WrongUniverse(InputError):
    pass


class ConstantFunction(InputError):
    pass


class ZeroDenominator(InputError):
    pass


class InvalidStart(InputError):
    pass


class DuplicateVertex(InputError):
    pass


class ParseError(InputError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class TooLargeForExhaustive(NCheegerError):
    pass


class NotSymmetric(NCheegerError, ValueError):
    pass


class NonPositiveMass(NCheegerError, ValueError):
    pass


class NoConvergence(NCheegerError, RuntimeError):
    pass
