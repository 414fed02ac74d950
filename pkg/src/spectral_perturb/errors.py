"""Exception types raised across the package."""


class InvalidNode(ValueError):
    """Node index outside 0..n-1."""


class SelfLoopRejected(ValueError):
    """Pair (i, i) where a proper edge is required."""


class EdgeStateConflict(ValueError):
    """Adding an existing edge, or removing an absent one."""


class GenerationFailed(RuntimeError):
    """Random-graph generation could not produce a valid graph."""


class NotConnected(ValueError):
    """Operation requires a connected graph."""


class DegenerateSpectrum(ValueError):
    """Leading eigenvalue absent or not simple enough to work with."""


class InvalidVector(ValueError):
    """Vector input that is identically zero."""


class ShapeError(ValueError):
    """Vector/matrix dimension mismatch."""


class AlignmentFailure(RuntimeError):
    """Perturbed eigenvector nearly orthogonal to the reference one."""


class NumericalBlowup(RuntimeError):
    """Non-finite state encountered during time integration."""


class InvalidCoupling(ValueError):
    """Coupling strength outside the admissible range."""
