"""Exception hierarchy shared across the package.

``ValidationError`` covers everything caused by bad input (malformed files,
unnormalized states, impossible shapes); the CLI maps it to exit code 2.
``InternalConsistencyError`` flags results that violate the library's own
mathematical guarantees and maps to exit code 3.
"""


class EntcorrError(Exception):
    """Base class for all package errors."""


class ValidationError(EntcorrError):
    """Input failed a validation contract."""


class DimensionMismatch(ValidationError):
    """Declared subsystem dimensions do not match the data layout."""


class NotNormalized(ValidationError):
    """Pure-state amplitudes are farther than NORM_TOL from unit norm."""


class NonFinite(ValidationError):
    """Data contains NaN or infinite entries."""


class NotHermitian(ValidationError):
    """Density matrix is not Hermitian within tolerance."""


class TraceNotOne(ValidationError):
    """Density matrix trace is not 1 within tolerance."""


class NotPositive(ValidationError):
    """Density matrix has an eigenvalue below -1e-9."""


class WrongDimension(ValidationError):
    """Operation is undefined for the state's subsystem dimensions."""


class InvalidShots(ValidationError):
    """Shot count must be a positive integer."""


class TooFewShots(ValidationError):
    """Record holds fewer shots than estimation requires."""


class InvalidSchedule(ValidationError):
    """Shot schedule must be strictly increasing."""


class StateFormatError(ValidationError):
    """File content does not conform to the state/record text format."""


class InternalConsistencyError(EntcorrError):
    """A computed value violated an internal mathematical guarantee."""
