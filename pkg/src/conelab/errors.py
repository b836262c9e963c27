"""Exception hierarchy. Every error raised by the package derives from ConelabError."""

from __future__ import annotations


class ConelabError(Exception):
    """Base class; ``witness`` carries machine-readable replay data when available."""

    def __init__(self, message: str = "", witness: dict | None = None):
        super().__init__(message)
        self.witness = witness or {}


class InvalidKind(ConelabError):
    pass


class ParseError(ConelabError):
    pass


class AlgebraMismatch(ConelabError):
    pass


class SpectralFailure(ConelabError):
    pass


class NotAnEffect(ConelabError):
    pass


class NotAnIdempotent(ConelabError):
    pass


class NotAnAtom(ConelabError):
    pass


class InvalidFrame(ConelabError):
    pass


class InconsistentOrthogonality(ConelabError):
    pass


class InvalidState(ConelabError):
    pass


class InvalidAutomorphism(ConelabError):
    pass


class NotPositiveDefinite(ConelabError):
    pass


class EpsilonNotConstant(ConelabError):
    def __init__(self, message, lo, hi, witness=None):
        super().__init__(message, witness)
        self.lo = lo
        self.hi = hi


class EpsilonOutOfRange(ConelabError):
    pass


class SelfDualityViolated(ConelabError):
    pass


class NoTransporter(ConelabError):
    """Raised when no automorphism maps the given atoms/frames onto each other.

    ``obstruction`` names the structural reason (``FactorSignatureMismatch``,
    ``NonIsomorphicFactors``, ``Unsupported``).
    """

    def __init__(self, message, obstruction, witness=None):
        super().__init__(message, witness)
        self.obstruction = obstruction


class SizeMismatch(ConelabError):
    pass


class DimensionMismatch(ConelabError):
    pass


class NumericalFailure(ConelabError):
    pass


class NotAVertex(ConelabError):
    pass


class PointOutside(ConelabError):
    pass


class TooManyVertices(ConelabError):
    pass


class NotAnAutomorphism(ConelabError):
    pass


class InvalidPolytope(ConelabError):
    pass
