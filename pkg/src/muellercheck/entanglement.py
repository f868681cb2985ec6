"""Two-mode beams: polarization (x/y) tensored with two orthonormal spatial modes.

Amplitudes are ordered ``(C11, C12, C21, C22)`` with the polarization index
slow and the spatial index fast, matching the row-major flattening used for
H(M). A Mueller matrix acts on the 4x4 beam-coherence-polarization (BCP)
matrix through H(M) on the polarization indices only.
"""
import numpy as np

from .errors import ConsistencyError, InvalidInputError
from .mueller import h_from_mueller
from .polarization import DEFAULT_TOL, hermitian_part


def _as_amplitudes(c):
    c = np.asarray(c, dtype=complex)
    if c.shape != (4,):
        raise InvalidInputError(f"two-mode amplitude must have 4 components, got shape {c.shape}")
    return c


def _as_bcp(phi_hat):
    phi_hat = np.asarray(phi_hat, dtype=complex)
    if phi_hat.shape != (4, 4):
        raise InvalidInputError(f"BCP matrix must be 4x4, got shape {phi_hat.shape}")
    return phi_hat


def bell_state(normalized=False):
    """``chi_11 + chi_22``, i.e. ``C = (1, 0, 0, 1)``; unit norm if ``normalized``."""
    c = np.array([1, 0, 0, 1], dtype=complex)
    return c / np.sqrt(2) if normalized else c


def product_state(polarization, spatial):
    """Separable amplitude ``p kron q``."""
    p = np.asarray(polarization, dtype=complex)
    q = np.asarray(spatial, dtype=complex)
    if p.shape != (2,) or q.shape != (2,):
        raise InvalidInputError("product_state expects two length-2 vectors")
    return np.kron(p, q)


def concurrence(c):
    """``2 |C11 C22 - C12 C21| / ||C||^2``, in ``[0, 1]``."""
    c = _as_amplitudes(c)
    norm2 = np.vdot(c, c).real
    if norm2 == 0:
        raise InvalidInputError("concurrence of the zero vector is undefined")
    return float(2.0 * abs(c[0] * c[3] - c[1] * c[2]) / norm2)


def is_separable(c, tol=DEFAULT_TOL):
    return concurrence(c) <= tol


def bcp_from_pure(c):
    c = _as_amplitudes(c)
    return np.outer(c, c.conj())


def bcp_from_ensemble(members):
    """``sum_k w_k C_k C_k^dagger / sum_k w_k`` over ``(weight, amplitude)`` pairs."""
    members = list(members)
    if not members:
        raise InvalidInputError("empty ensemble")
    weights = np.array([float(w) for w, _ in members])
    if np.any(weights < 0) or not weights.sum() > 0:
        raise InvalidInputError("ensemble weights must be non-negative with a positive sum")
    amps = np.array([_as_amplitudes(c) for _, c in members])
    return np.einsum("k,ki,kj->ij", weights, amps, amps.conj()) / weights.sum()


def apply_mueller_to_bcp(m, phi_hat):
    """``Phi'[i a, j b] = sum_{k l} H[i k, j l] Phi[k a, l b]``; spatial indices untouched."""
    phi_hat = _as_bcp(phi_hat)
    h = h_from_mueller(m).reshape(2, 2, 2, 2)
    phi = phi_hat.reshape(2, 2, 2, 2)
    return np.einsum("ikjl,kalb->iajb", h, phi).reshape(4, 4)


def is_physical_bcp(phi_hat, tol=DEFAULT_TOL):
    phi_hat = hermitian_part(_as_bcp(phi_hat), "BCP matrix")
    tr = np.trace(phi_hat).real
    return bool(np.linalg.eigvalsh(phi_hat)[0] >= -tol * abs(tr))


def witness_negativity(m):
    """Send the entangled beam ``chi_11 + chi_22`` through ``m``.

    Returns
    -------
    (min_eigenvalue, output_state) : (float, ndarray)
        The output BCP matrix equals H(M) entry for entry, so a negative
        ``min_eigenvalue`` shows ``m`` is unphysical.
    """
    out = apply_mueller_to_bcp(m, bcp_from_pure(bell_state()))
    h = h_from_mueller(m)
    if np.max(np.abs(out - h)) > 1e-12 * (1.0 + np.max(np.abs(h))):
        raise ConsistencyError("witness output differs from H(M)")
    out = 0.5 * (out + out.conj().T)
    min_eig = float(np.linalg.eigvalsh(out)[0])
    if abs(min_eig - np.linalg.eigvalsh(h)[0]) > 1e-12 * (1.0 + np.max(np.abs(h))):
        raise ConsistencyError("witness eigenvalue differs from min eig H(M)")
    return min_eig, out
