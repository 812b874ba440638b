"""Exception types shared across the package."""


class QqvqeError(Exception):
    """Base class for all package errors."""


class NotHermitianError(QqvqeError):
    """Operator expected to be Hermitian is not (within tolerance)."""


class UnsupportedBasisError(QqvqeError):
    """Measurement basis is not one of the supported joint Pauli settings."""


class OutOfRangeError(QqvqeError):
    """Numeric parameter outside its admissible range."""


class SingularGammaError(QqvqeError):
    """Confusion matrix is (numerically) singular and cannot be inverted."""


class MissingEstimateError(QqvqeError):
    """A Pauli-string expectation required for the energy sum is absent."""


class TableParseError(QqvqeError):
    """Hamiltonian CSV could not be parsed; message names the offending cell."""


class TableValidationError(QqvqeError):
    """Parsed Hamiltonian table violates a structural constraint."""


class UnknownDistanceError(QqvqeError):
    """Requested interatomic distance is not present in the loaded table."""
