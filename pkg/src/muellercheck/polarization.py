"""Single-point polarization states: Jones vectors, coherency matrices, Stokes vectors.

Conventions
-----------
* Jones vectors are length-2 complex arrays ``(E1, E2)`` (x and y amplitudes).
  The carrier factor ``exp(i(kz - wt))`` is never stored.
* Coherency matrices are 2x2 complex Hermitian PSD arrays ``<E E^dagger>``.
* Stokes vectors are length-4 real arrays ``(S0, S1, S2, S3)`` with
  ``S_a = tr(tau_a Phi)`` and ``tau = (I, sigma_z, sigma_x, sigma_y)``.
"""
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import InvalidInputError

DEFAULT_TOL = 1e-9

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)

TAU = np.array([np.eye(2, dtype=complex), SIGMA_Z, SIGMA_X, SIGMA_Y])
TAU.flags.writeable = False

# Maps the row-major flattening (Phi11, Phi12, Phi21, Phi22) to Stokes components.
A_MATRIX = np.array([[1, 0, 0, 1],
                     [1, 0, 0, -1],
                     [0, 1, 1, 0],
                     [0, 1j, -1j, 0]], dtype=complex)
A_MATRIX.flags.writeable = False

A_INV = 0.5 * A_MATRIX.conj().T
A_INV.flags.writeable = False

# Minkowski metric on Stokes space.
G_METRIC = np.diag([1.0, -1.0, -1.0, -1.0])
G_METRIC.flags.writeable = False


class StokesClass(Enum):
    OUTSIDE_CONE = "OutsideCone"
    PURE_BOUNDARY = "PureBoundary"
    MIXED_INTERIOR = "MixedInterior"


@dataclass(frozen=True)
class JonesVector:
    """A deterministic polarization state ``(e1, e2)``."""

    e1: complex
    e2: complex

    @classmethod
    def from_array(cls, e):
        e = np.asarray(e, dtype=complex)
        if e.shape != (2,):
            raise InvalidInputError(f"Jones vector must have 2 components, got shape {e.shape}")
        return cls(complex(e[0]), complex(e[1]))

    @property
    def array(self):
        return np.array([self.e1, self.e2], dtype=complex)

    @property
    def intensity(self):
        return abs(self.e1) ** 2 + abs(self.e2) ** 2

    @property
    def gamma(self):
        """Polarization ratio ``e1/e2``; ``None`` when ``e2 == 0``."""
        if self.e2 == 0:
            return None
        return self.e1 / self.e2

    def coherency(self):
        e = self.array
        return np.outer(e, e.conj())


def _as_square(x, n, name, dtype=complex):
    x = np.asarray(x, dtype=dtype)
    if x.shape != (n, n):
        raise InvalidInputError(f"{name} must be {n}x{n}, got shape {x.shape}")
    return x


def hermitian_part(x, name="matrix", tol=DEFAULT_TOL):
    """Return ``(x + x^dagger)/2`` after checking ``x`` is Hermitian within tolerance.

    The accepted residual is ``tol * (1 + |tr x|)``.
    """
    x = np.asarray(x, dtype=complex)
    if x.ndim != 2 or x.shape[0] != x.shape[1]:
        raise InvalidInputError(f"{name} must be square, got shape {x.shape}")
    residual = np.max(np.abs(x - x.conj().T)) if x.size else 0.0
    if residual > tol * (1.0 + abs(np.trace(x))):
        raise InvalidInputError(f"{name} is not Hermitian (max |x - x^dagger| = {residual:.3g})")
    return 0.5 * (x + x.conj().T)


def as_coherency(phi, tol=DEFAULT_TOL):
    """Validate a 2x2 Hermitian matrix and return its Hermitian part."""
    phi = _as_square(phi, 2, "coherency matrix")
    return hermitian_part(phi, "coherency matrix", tol)


def is_physical_coherency(phi, tol=DEFAULT_TOL):
    """True when ``phi`` is PSD with positive trace (``tr > 0`` and ``det >= 0``)."""
    phi = as_coherency(phi, tol)
    tr = np.trace(phi).real
    if tr <= 0:
        return False
    return np.linalg.eigvalsh(phi)[0] >= -tol * tr


def stokes_from_coherency(phi, tol=DEFAULT_TOL):
    """Stokes vector ``S_a = tr(tau_a phi)`` of a Hermitian coherency matrix."""
    phi = as_coherency(phi, tol)
    s = np.einsum("aij,ji->a", TAU, phi)
    return s.real.copy()


def coherency_from_stokes(s):
    """Coherency matrix ``phi = 1/2 sum_a S_a tau_a``; physicality is not checked."""
    s = np.asarray(s, dtype=float)
    if s.shape != (4,):
        raise InvalidInputError(f"Stokes vector must have 4 components, got shape {s.shape}")
    return 0.5 * np.einsum("a,aij->ij", s, TAU)


def minkowski_norm2(s):
    """``S^T G S = S0^2 - S1^2 - S2^2 - S3^2``; broadcasts over leading axes."""
    s = np.asarray(s, dtype=float)
    return s[..., 0] ** 2 - np.sum(s[..., 1:] ** 2, axis=-1)


def degree_of_polarization(s):
    s = np.asarray(s, dtype=float)
    if s[0] <= 0:
        raise InvalidInputError("degree of polarization needs S0 > 0")
    return float(np.linalg.norm(s[1:]) / s[0])


def validate_stokes(s, tol=DEFAULT_TOL):
    """Classify a Stokes vector against the forward light cone.

    Returns
    -------
    StokesClass
        ``PURE_BOUNDARY`` when ``|S^T G S| <= tol S0^2`` with ``S0 > 0``,
        ``MIXED_INTERIOR`` when ``S^T G S > tol S0^2`` with ``S0 > 0``,
        ``OUTSIDE_CONE`` otherwise.
    """
    s = np.asarray(s, dtype=float)
    if s.shape != (4,):
        raise InvalidInputError(f"Stokes vector must have 4 components, got shape {s.shape}")
    s0 = s[0]
    if not s0 > 0:
        return StokesClass.OUTSIDE_CONE
    q = minkowski_norm2(s)
    scale = tol * s0 * s0
    if abs(q) <= scale:
        return StokesClass.PURE_BOUNDARY
    if q > scale:
        return StokesClass.MIXED_INTERIOR
    return StokesClass.OUTSIDE_CONE


def coherency_from_ensemble(members):
    """Weighted ensemble average ``sum w_k E_k E_k^dagger / sum w_k``.

    Parameters
    ----------
    members : iterable of (weight, jones_vector)
        Weights must be non-negative with a positive sum. Jones vectors may be
        arrays or :class:`JonesVector` instances.
    """
    weights = []
    vectors = []
    for w, e in members:
        if isinstance(e, JonesVector):
            e = e.array
        e = np.asarray(e, dtype=complex)
        if e.shape != (2,):
            raise InvalidInputError(f"Jones vector must have 2 components, got shape {e.shape}")
        weights.append(float(w))
        vectors.append(e)
    if not vectors:
        raise InvalidInputError("empty ensemble")
    weights = np.asarray(weights)
    if np.any(weights < 0):
        raise InvalidInputError("ensemble weights must be non-negative")
    total = weights.sum()
    if not total > 0:
        raise InvalidInputError("ensemble weights must have a positive sum")
    vectors = np.asarray(vectors)
    return np.einsum("k,ki,kj->ij", weights, vectors, vectors.conj()) / total


def jones_apply(j, e):
    j = _as_square(j, 2, "Jones matrix")
    if isinstance(e, JonesVector):
        return JonesVector.from_array(j @ e.array)
    e = np.asarray(e, dtype=complex)
    if e.shape != (2,):
        raise InvalidInputError(f"Jones vector must have 2 components, got shape {e.shape}")
    return j @ e


def jones_apply_coherency(j, phi):
    """``phi -> J phi J^dagger``."""
    j = _as_square(j, 2, "Jones matrix")
    phi = _as_square(phi, 2, "coherency matrix")
    return j @ phi @ j.conj().T
