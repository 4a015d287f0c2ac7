"""Shared exception types."""


class GapcertError(Exception):
    pass


class ResourceLimitError(GapcertError):
    """A requested computation exceeds the configured size policy."""

    def __init__(self, message, dimension=None):
        super().__init__(message)
        self.dimension = dimension


class ConvergenceError(GapcertError):
    """An iterative eigensolve did not reach the requested tolerance."""

    def __init__(self, message, best_residual=None):
        super().__init__(message)
        self.best_residual = best_residual


class GramSingularError(GapcertError):
    """The permutation-vector Gram matrix is numerically singular."""


class InapplicableBoundError(GapcertError):
    """A closed-form bound was requested outside its validity regime."""


class IndeterminateGapError(GapcertError):
    """All computed eigenvalues sit below the kernel threshold."""
