"""Exception hierarchy shared by all modules."""


class GammaGreyError(Exception):
    """Base class for every error raised by :mod:`gammagrey`."""


class DomainError(GammaGreyError, ValueError):
    """An argument lies outside the domain where the quantity is defined."""


class PoleError(DomainError):
    """Evaluation at a pole (e.g. a hypergeometric lower parameter in 0, -1, -2, ...)."""


class DegenerateDensityError(DomainError):
    """The mixing density has no Lebesgue density at rho = 1 (point mass at 1)."""


class GridMismatchError(DomainError):
    """Two grid functions do not share the same grid."""


class ConvergenceError(GammaGreyError, ArithmeticError):
    """A quadrature or series failed to reach its tolerance."""


class SeriesNotConverged(ConvergenceError):
    """Series hit its term cap; carries the partial sum and a tail bound."""

    def __init__(self, message, partial=None, tail_bound=None, n_terms=None):
        super().__init__(message)
        self.partial = partial
        self.tail_bound = tail_bound
        self.n_terms = n_terms
