"""Exception types shared across the package."""


class QpbohmError(Exception):
    """Base class for all package-specific errors."""


class DimMismatch(QpbohmError):
    """Operands live on Hilbert spaces of different dimension."""


class NonHermitian(QpbohmError):
    """A matrix required to be Hermitian is not, beyond tolerance."""


class OrthogonalPrePost(QpbohmError):
    """Pre- and post-selected states are (numerically) orthogonal."""


class NotProjector(QpbohmError):
    """A matrix required to be an orthogonal projector is not."""


class WrongKind(QpbohmError):
    """A quasiprobability distribution of the wrong kind was supplied."""


class SolverFailure(QpbohmError):
    """The implicit linear solve of the time stepper failed."""


class NodeEncounter(QpbohmError):
    """A trajectory entered a region where the guiding field is undefined."""

    def __init__(self, trajectory_index: int, step: int, position: float):
        self.trajectory_index = trajectory_index
        self.step = step
        self.position = position
        super().__init__(
            f"trajectory {trajectory_index} hit an undefined velocity region "
            f"at step {step}, x={position:.6g}"
        )


class GridMismatch(QpbohmError):
    """Two grid-based quantities do not share the same grid."""


class ZeroDensityPoint(QpbohmError):
    """Conditioning on a point whose position density is numerically zero."""
