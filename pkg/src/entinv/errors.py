"""Exception types shared across the package."""


class EntinvError(Exception):
    """Base class for every error raised by this package."""


class BadShape(EntinvError):
    """Amplitude matrix is not square or the dimension is unsupported."""


class NotNormalized(EntinvError):
    """Squared amplitudes do not sum to one within tolerance."""


class DimensionMismatch(EntinvError):
    """Operands describe systems of different dimensions."""


class KInconsistent(EntinvError):
    """The two independent determinant-invariant computations disagree."""


class NumericalFailure(EntinvError):
    """A numerical routine failed to converge or lost too much accuracy."""


class NoConvergence(NumericalFailure):
    """An iterative solver exhausted its iteration budget."""


class OutOfRange(EntinvError):
    """A scalar argument lies outside its mathematically valid range."""


class BadParams(EntinvError):
    """Canonical-form parameters have a wrong sign, count, or norm."""


class Infeasible(EntinvError):
    """Target invariant lies outside the attainable range."""


class InvariantMismatch(EntinvError):
    """States have different Schmidt spectra, so no local-unitary map exists."""


class RefinementFailed(NumericalFailure):
    """Degenerate-spectrum refinement could not reach the residual target."""

    def __init__(self, message: str, residual: float):
        super().__init__(message)
        self.residual = residual
