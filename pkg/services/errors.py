"""Domain exceptions shared by the services, workers and CLI."""

from __future__ import annotations

from typing import Any, Optional, Tuple


class MacdonaldError(Exception):
    """Base class for every error raised by the engine."""


class ParseError(MacdonaldError, ValueError):
    """Malformed composition, point, spec or identity-file text."""


class RangeError(MacdonaldError, ValueError):
    """A parameter is outside its documented range."""


class IndexOutOfRange(RangeError):
    """Operator index outside 1..N-1 (or 1..N for Y operators)."""


class NvarsMismatch(MacdonaldError, ValueError):
    """Two MacPoly values with different numbers of variables were combined."""


class InvalidStep(MacdonaldError, ValueError):
    """A swap step was applied where the composition is not strictly ascending."""

    def __init__(self, message: str, index: Optional[int] = None):
        super().__init__(message)
        self.index = index


class AlphaIsOne(MacdonaldError, ZeroDivisionError):
    """The Yang operator (or a jump operator) was requested with parameter 1."""


class NotProductForm(MacdonaldError, ArithmeticError):
    """A (q,t)-polynomial does not factor as q^e t^f prod(1 - q^a t^b)^m."""

    def __init__(self, message: str, residual: Any = None):
        super().__init__(message)
        self.residual = residual


class EndpointMismatch(MacdonaldError, ValueError):
    """Certificates combined with incompatible endpoints."""


class SpectralMismatch(MacdonaldError, ValueError):
    """A JumpSpec disagrees with the spectral vector of the vertex it is applied at."""


class ReplayMismatch(MacdonaldError, RuntimeError):
    """A generated path does not land where its construction says it should."""


class DegeneratePolynomial(MacdonaldError, ZeroDivisionError):
    """A coefficient denominator vanishes under a specialization."""

    def __init__(self, message: str, factor: Optional[Tuple[int, int]] = None):
        super().__init__(message)
        self.factor = factor
