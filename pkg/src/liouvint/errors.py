"""Exception hierarchy shared by all liouvint modules."""


class LiouvintError(Exception):
    """Base class for every error raised by this package."""


class DimensionMismatch(LiouvintError):
    """Operands have incompatible or unexpected dimensions."""


class OddDimension(LiouvintError):
    """A phase-space matrix must have even side length."""


class Singular(LiouvintError):
    """Linear solve hit a pivot below the singularity threshold."""


class Exceptional(LiouvintError):
    """det(I + M) is too close to zero for the Cayley transform."""


class NotExact(LiouvintError):
    """Coefficient matrix does not differentiate to the symplectic form.

    The offending residual matrix (A^T - A minus the expected antisymmetric
    part) is stored in ``residual``.
    """

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class NotSymmetric(LiouvintError):
    """A matrix required to be symmetric is not."""


class NotHamiltonian(LiouvintError):
    """A matrix required to be Hamiltonian is not."""


class NotSymplectic(LiouvintError):
    """A matrix required to be symplectic is not."""


class Incompatible(LiouvintError):
    """Product form fails the K1 = K3 compatibility condition."""


class NotSeparable(LiouvintError):
    """System lacks the separable kinetic/potential split."""


class DomainError(LiouvintError):
    """State lies outside the system's admissible domain."""


class NoConvergence(LiouvintError):
    """Implicit solver failed to reach the requested residual.

    Carries the last ``residual`` and ``iterate``; when raised from a
    multi-step integration, ``partial`` holds the trajectory up to the
    failing step.
    """

    def __init__(self, message, residual=None, iterate=None, partial=None):
        super().__init__(message)
        self.residual = residual
        self.iterate = iterate
        self.partial = partial
