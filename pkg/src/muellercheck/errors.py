"""Exception types raised by muellercheck."""


class InvalidInputError(ValueError):
    """Input violates a precondition (shape, hermiticity, empty ensemble...)."""


class NotPhysicalError(ValueError):
    """The associated Hermitian matrix of a Mueller matrix is not PSD.

    ``min_eigenvalue`` carries the offending smallest eigenvalue of H.
    """

    def __init__(self, min_eigenvalue, message=None):
        self.min_eigenvalue = float(min_eigenvalue)
        if message is None:
            message = f"H(M) is not positive semidefinite: min_h_eig={self.min_eigenvalue:.6g}"
        super().__init__(message)


class ConsistencyError(RuntimeError):
    """An internal cross-check failed; indicates a bug or severe round-off."""
