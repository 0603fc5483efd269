"""Exception types shared across the package."""


class QuasiCError(Exception):
    """Base class for all errors raised by this package."""


class NotHermitianError(QuasiCError):
    """Anti-Hermitian part of a matrix exceeds the tolerance."""


class NotPositiveDefiniteError(QuasiCError):
    """A matrix required to be positive definite has an eigenvalue <= tol."""


class DefectiveMatrixError(QuasiCError):
    """Matrix is not diagonalizable (coalescent eigenvalue, single eigenvector)."""


class NearlyDefectiveError(DefectiveMatrixError):
    """Eigenvector matrix condition number exceeds the safe threshold."""


class DriveRangeError(QuasiCError):
    """Drive evaluated or integrated outside its tabulated range."""


class RegimeMismatchError(QuasiCError):
    """Closed form evaluated with parameters outside its validity regime."""


class ExceptionalPointSingularError(QuasiCError):
    """Closed form with a 1/xi prefactor evaluated where xi is below tolerance."""


class NotTemplateError(QuasiCError):
    """Matrix eigenvalues are not a (+a, -a) pair, so it cannot be sign-normalized."""


class InvalidSystemError(QuasiCError):
    """Biorthonormal system fails its completeness requirement."""


class OffGridError(QuasiCError):
    """Requested time is not a node of the evolution grid."""


class BranchFlipError(QuasiCError):
    """Consecutive eigenstate samples overlap too weakly to define a smooth gauge."""
