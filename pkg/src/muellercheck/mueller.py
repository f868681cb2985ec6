"""Mueller matrices and their associated Hermitian matrix H(M).

For a real 4x4 Mueller matrix ``M`` the matrix ``B = A^-1 M A`` acts on the
row-major flattened coherency matrix. ``H`` is ``B`` with its indices
regrouped, ``H[2i+k, 2j+l] = B[2i+j, 2k+l]``, and it is Hermitian for every
real ``M``. ``M`` is a single Jones system iff ``H`` has rank one, and a
convex sum of Jones systems iff ``H`` is positive semidefinite.
"""
from dataclasses import dataclass, field

import numpy as np

from .errors import ConsistencyError, InvalidInputError, NotPhysicalError
from .polarization import A_INV, A_MATRIX, DEFAULT_TOL, hermitian_part


def as_mueller(m):
    m = np.asarray(m)
    if m.shape != (4, 4):
        raise InvalidInputError(f"Mueller matrix must be 4x4, got shape {m.shape}")
    if np.iscomplexobj(m):
        if np.max(np.abs(m.imag)) > 0:
            raise InvalidInputError("Mueller matrix must be real")
        m = m.real
    return np.asarray(m, dtype=float)


def _regroup(x):
    # (i, j, k, l) -> (i, k, j, l) on the 2x2x2x2 view; an involution.
    return x.reshape(2, 2, 2, 2).transpose(0, 2, 1, 3).reshape(4, 4)


def h_from_mueller(m):
    """Hermitian matrix H(M) associated with a real 4x4 matrix."""
    m = as_mueller(m)
    b = A_INV @ m @ A_MATRIX
    h = _regroup(b)
    residual = np.max(np.abs(h - h.conj().T))
    if residual > 1e-12 * (1.0 + np.linalg.norm(h)):
        raise ConsistencyError(f"H(M) not Hermitian, residual {residual:.3g}")
    return 0.5 * (h + h.conj().T)


def mueller_from_h(h, tol=DEFAULT_TOL):
    """Inverse of :func:`h_from_mueller`."""
    h = np.asarray(h, dtype=complex)
    if h.shape != (4, 4):
        raise InvalidInputError(f"H must be 4x4, got shape {h.shape}")
    h = hermitian_part(h, "H", tol)
    m = A_MATRIX @ _regroup(h) @ A_INV
    if np.max(np.abs(m.imag)) > 1e-12 * (1.0 + np.linalg.norm(m)):
        raise ConsistencyError("M recovered from H has a non-negligible imaginary part")
    return m.real.copy()


def jones_to_vector(j):
    """Row-major flattening ``(J11, J12, J21, J22)``."""
    j = np.asarray(j, dtype=complex)
    if j.shape != (2, 2):
        raise InvalidInputError(f"Jones matrix must be 2x2, got shape {j.shape}")
    return j.reshape(4).copy()


def vector_to_jones(v):
    v = np.asarray(v, dtype=complex)
    if v.shape != (4,):
        raise InvalidInputError(f"expected 4 components, got shape {v.shape}")
    return v.reshape(2, 2).copy()


def mueller_jones_from_jones(j):
    """Mueller-Jones matrix ``M(J) = A (J kron J*) A^-1``."""
    j = np.asarray(j, dtype=complex)
    if j.shape != (2, 2):
        raise InvalidInputError(f"Jones matrix must be 2x2, got shape {j.shape}")
    m = A_MATRIX @ np.kron(j, j.conj()) @ A_INV
    return m.real.copy()


def apply_mueller(m, s):
    m = as_mueller(m)
    s = np.asarray(s, dtype=float)
    if s.shape != (4,):
        raise InvalidInputError(f"Stokes vector must have 4 components, got shape {s.shape}")
    return m @ s


def _fix_phase(v):
    # Largest-magnitude component made real positive; argmax breaks ties by index.
    k = np.argmax(np.abs(v))
    if v[k] == 0:
        return v
    return v * (abs(v[k]) / v[k])


def is_mueller_jones(m, tol=DEFAULT_TOL):
    """Return the Jones matrix of ``m`` if it is a Mueller-Jones matrix, else ``None``.

    ``m`` qualifies when the top eigenvalue of H(M) is positive and every other
    eigenvalue satisfies ``|lambda_k| <= tol * lambda_1``. The returned matrix
    is ``sqrt(lambda_1)`` times the reshaped top eigenvector, with its
    largest-magnitude entry made real positive.
    """
    w, v = np.linalg.eigh(h_from_mueller(m))
    top = w[-1]
    if not top > 0:
        return None
    if np.any(np.abs(w[:-1]) > tol * top):
        return None
    return vector_to_jones(np.sqrt(top) * _fix_phase(v[:, -1]))


@dataclass
class JonesDecomposition:
    """``M = sum_k weight_k M(jones_k)`` with unit-Frobenius Jones matrices."""

    weights: np.ndarray
    jones: list = field(default_factory=list)

    def __len__(self):
        return len(self.jones)

    def __iter__(self):
        return iter(zip(self.weights, self.jones))

    def reconstruct(self):
        m = np.zeros((4, 4))
        for w, j in self:
            m += w * mueller_jones_from_jones(j)
        return m


def h_spectrum(m):
    """Eigenvalues of H(M), ascending."""
    return np.linalg.eigvalsh(h_from_mueller(m))


def decompose_convex(m, tol=DEFAULT_TOL):
    """Spectral decomposition of a physical Mueller matrix into Jones systems.

    Raises
    ------
    NotPhysicalError
        If ``min eig H(M) < -tol * tr H(M)``.
    """
    h = h_from_mueller(m)
    w, v = np.linalg.eigh(h)
    tr = float(np.trace(h).real)
    if w[0] < -tol * tr:
        raise NotPhysicalError(w[0])
    keep = np.flatnonzero(w > tol * tr)[::-1]
    weights = w[keep].copy()
    jones = [vector_to_jones(_fix_phase(v[:, k])) for k in keep]
    return JonesDecomposition(weights=weights, jones=jones)
