"""Pre-Mueller (cone-preserving) vs physical Mueller classification.

A real 4x4 ``M`` is *pre-Mueller* when it maps the forward Stokes cone into
itself, and *physical* when H(M) is positive semidefinite. Every physical
matrix is pre-Mueller; the difference is the "grey" set reported as
``PRE_MUELLER_ONLY``.

Cone membership is decided numerically. By linearity it is enough to check
pure states ``s = (1, u)`` with ``u`` on the unit sphere, where the image
``Ms`` must satisfy ``(Ms)_0 > 0`` and ``(Ms)^T G (Ms) >= 0``. The quadratic
``q(u) = (Ms)^T G (Ms)`` is minimized with a dense theta/phi grid followed by
local descent from the best grid minima.
"""
import functools
import itertools
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple

import numpy as np

from .errors import ConsistencyError, InvalidInputError
from .mueller import as_mueller, h_from_mueller, is_mueller_jones
from .polarization import DEFAULT_TOL

# Slack on the subset check M+ within M, in units of tol. First-order
# perturbation of a PSD H by tol*tr(H) moves q by at most ~16 tol ||M||^2.
_SUBSET_SLACK = 100.0


class MatrixKind(Enum):
    NON_PRE_MUELLER = "NonPreMueller"
    PRE_MUELLER_ONLY = "PreMuellerOnly"
    PHYSICAL_MUELLER = "PhysicalMueller"


class DiagonalRegion(Enum):
    OUTSIDE_CUBE = "outside"
    CUBE_ONLY = "cube_only"
    TETRAHEDRON = "tetrahedron"


@dataclass(frozen=True)
class ConeScanConfig:
    n_theta: int = 181
    n_phi: int = 361
    tol: float = DEFAULT_TOL
    step_tol: float = 1e-8
    max_starts: int = 4

    def __post_init__(self):
        if self.n_theta < 2 or self.n_phi < 3:
            raise InvalidInputError("cone scan grid needs n_theta >= 2 and n_phi >= 3")

    @classmethod
    def from_grid(cls, n, tol=DEFAULT_TOL):
        """``n`` polar samples and ``2n - 1`` azimuthal samples (1 degree at n=181)."""
        return cls(n_theta=n, n_phi=2 * n - 1, tol=tol)


class PreMuellerCheck(NamedTuple):
    is_pre_mueller: bool
    cone_min_value: float
    cone_argmin: np.ndarray
    min_intensity: float


@dataclass(frozen=True)
class ClassificationResult:
    kind: MatrixKind
    is_mueller_jones: bool
    min_h_eigenvalue: float
    cone_min_value: float
    cone_argmin: np.ndarray
    trace_h: float


def pure_stokes(theta, phi):
    """Unit-intensity pure Stokes vector on the Poincare sphere."""
    st = np.sin(theta)
    return np.array([1.0, st * np.cos(phi), st * np.sin(phi), np.cos(theta)])


def _cone_quadratic(m):
    # q(u) = u^T Q u + 2 r^T u + c for Ms = m0 + N u.
    g = np.diag([1.0, -1.0, -1.0, -1.0])
    m0 = m[:, 0]
    n = m[:, 1:]
    return n.T @ g @ n, n.T @ g @ m0, m0 @ g @ m0


@functools.lru_cache(maxsize=8)
def _sphere_grid(n_theta, n_phi):
    theta = np.linspace(0.0, np.pi, n_theta)
    phi = np.linspace(0.0, 2.0 * np.pi, n_phi)
    st = np.sin(theta)[:, None]
    u = np.stack([st * np.cos(phi), st * np.sin(phi),
                  np.broadcast_to(np.cos(theta)[:, None], (n_theta, n_phi))], axis=-1)
    u = u.reshape(-1, 3)
    # Monomials so that q on the grid is one matrix-vector product.
    x, y, z = u.T
    features = np.stack([x * x, y * y, z * z, 2 * x * y, 2 * x * z, 2 * y * z,
                         2 * x, 2 * y, 2 * z, np.ones_like(x)], axis=1)
    u.flags.writeable = False
    features.flags.writeable = False
    return u, features


def _quadratic_coefficients(q_mat, r, c):
    return np.array([q_mat[0, 0], q_mat[1, 1], q_mat[2, 2], q_mat[0, 1], q_mat[0, 2],
                     q_mat[1, 2], r[0], r[1], r[2], c])


def _grid_neighbours(idx, n_theta, n_phi):
    t, p = np.divmod(idx, n_phi)
    out = []
    for dt, dp in itertools.product((-1, 0, 1), repeat=2):
        if dt == 0 and dp == 0:
            continue
        tt = t + dt
        valid = (tt >= 0) & (tt < n_theta)
        out.append((np.clip(tt, 0, n_theta - 1) * n_phi + (p + dp) % n_phi, valid))
    return out


def _tangent_basis(u):
    a = np.array([1.0, 0.0, 0.0]) if abs(u[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
    e1 = np.cross(u, a)
    e1 /= np.linalg.norm(e1)
    return np.array([e1, np.cross(u, e1)])


def _refine(u, quad, step_tol, max_iter=100):
    """Riemannian Newton descent for ``q`` on the unit sphere starting at ``u``.

    Each iteration works in the tangent plane at the current point and maps
    back with ``normalize(u + B x)``; stops once the accepted step is below
    ``step_tol``.
    """
    q_mat, r, c = quad

    def q(v):
        return v @ q_mat @ v + 2.0 * r @ v + c

    u = u / np.linalg.norm(u)
    val = q(u)
    for _ in range(max_iter):
        basis = _tangent_basis(u)
        egrad = 2.0 * (q_mat @ u + r)
        grad = basis @ egrad
        hess = basis @ (2.0 * q_mat - (u @ egrad) * np.eye(3)) @ basis.T
        step = None
        eig = np.linalg.eigvalsh(hess)
        if eig[0] > 1e-12 * max(1.0, abs(eig[-1])):
            step = -np.linalg.solve(hess, grad)
        if step is None or step @ grad >= 0:
            step = -grad / max(abs(eig[-1]), np.linalg.norm(grad), 1e-300)
        t = 1.0
        while True:
            w = u + basis.T @ (t * step)
            cand = w / np.linalg.norm(w)
            cval = q(cand)
            if cval <= val or t < 1e-12:
                break
            t *= 0.5
        if cval > val:
            break
        size = t * np.linalg.norm(step)
        u, val = cand, cval
        if size < step_tol:
            break
    return val, u


def cone_minimum(m, cfg=None):
    """Minimum of ``(Ms)^T G (Ms)`` over unit-intensity pure states ``s``.

    Returns
    -------
    (value, argmin) : (float, ndarray)
        ``argmin`` is the minimizing pure Stokes vector ``(1, u)``.
    """
    cfg = cfg or ConeScanConfig()
    m = as_mueller(m)
    quad = _cone_quadratic(m)
    q_mat, r, c = quad
    u_grid, features = _sphere_grid(cfg.n_theta, cfg.n_phi)
    values = features @ _quadratic_coefficients(q_mat, r, c)

    # A grid point further than this above the best grid value cannot sit in
    # the basin of the global minimum.
    h = max(np.pi / (cfg.n_theta - 1), 2.0 * np.pi / (cfg.n_phi - 1))
    margin = h * h * (2.0 * np.linalg.norm(q_mat, 2) + 2.0 * np.linalg.norm(r)) + 1e-15
    best = int(np.argmin(values))
    near = np.flatnonzero(values <= values[best] + margin)
    is_min = np.ones(near.shape, dtype=bool)
    for nb, valid in _grid_neighbours(near, cfg.n_theta, cfg.n_phi):
        is_min &= ~valid | (values[near] <= values[nb])
    candidates = near[is_min] if is_min.any() else np.array([best])
    candidates = candidates[np.argsort(values[candidates], kind="stable")]

    best_val, best_u = values[best], u_grid[best]
    # Greedy selection of well-separated starting points, best first.
    starts = []
    remaining = u_grid[candidates]
    while len(remaining) and len(starts) < cfg.max_starts:
        starts.append(remaining[0])
        remaining = remaining[remaining @ remaining[0] <= np.cos(2 * h)]
    for u0 in starts:
        val, u = _refine(u0, quad, cfg.step_tol)
        if val < best_val:
            best_val, best_u = val, u
    return float(best_val), np.concatenate([[1.0], best_u])


def is_pre_mueller(m, cfg=None):
    """Decide whether ``m`` maps the Stokes cone into itself.

    The output intensity ``(Ms)_0 = M00 + M[0, 1:] . u`` is linear in ``u``
    so its minimum over pure states is ``M00 - |M[0, 1:]|`` exactly. A zero
    minimum intensity is tolerated only when the image of that state is the
    zero vector.
    """
    cfg = cfg or ConeScanConfig()
    m = as_mueller(m)
    value, argmin = cone_minimum(m, cfg)
    scale = float(np.sum(m * m))
    b = m[0, 1:]
    nb = np.linalg.norm(b)
    min_intensity = float(m[0, 0] - nb)
    ok = value >= -cfg.tol * scale
    if ok and min_intensity <= cfg.tol * np.sqrt(scale):
        if scale == 0.0:
            ok = False
        else:
            s_worst = np.concatenate([[1.0], -b / nb]) if nb > 0 else np.array([1.0, 0, 0, 0])
            image = m @ s_worst
            ok = min_intensity >= -cfg.tol * np.sqrt(scale) and \
                np.linalg.norm(image) <= cfg.tol * np.sqrt(scale)
    return PreMuellerCheck(bool(ok), value, argmin, min_intensity)


def classify(m, cfg=None):
    """Classify ``m`` as non-pre-Mueller, pre-Mueller only, or physical Mueller."""
    cfg = cfg or ConeScanConfig()
    m = as_mueller(m)
    h = h_from_mueller(m)
    min_eig = float(np.linalg.eigvalsh(h)[0])
    tr = float(np.trace(h).real)
    physical = min_eig >= -cfg.tol * tr
    check = is_pre_mueller(m, cfg)

    if physical:
        scale = float(np.sum(m * m))
        if check.cone_min_value < -_SUBSET_SLACK * cfg.tol * scale:
            raise ConsistencyError(
                f"H(M) is PSD but the cone minimum is {check.cone_min_value:.3g}")
        kind = MatrixKind.PHYSICAL_MUELLER
    elif check.is_pre_mueller:
        kind = MatrixKind.PRE_MUELLER_ONLY
    else:
        kind = MatrixKind.NON_PRE_MUELLER

    return ClassificationResult(
        kind=kind,
        is_mueller_jones=is_mueller_jones(m, cfg.tol) is not None,
        min_h_eigenvalue=min_eig,
        cone_min_value=check.cone_min_value,
        cone_argmin=check.cone_argmin,
        trace_h=tr,
    )


def _as_diag_params(p):
    d = np.asarray(p, dtype=float)
    if d.shape != (3,):
        raise InvalidInputError(f"expected (d1, d2, d3), got shape {d.shape}")
    return d


def tetrahedron_margins(p):
    """Left-hand sides of the four inequalities ``<= 1`` defining the tetrahedron."""
    d1, d2, d3 = _as_diag_params(p)
    return np.array([-d1 - d2 - d3, -d1 + d2 + d3, d1 + d2 - d3, d1 - d2 + d3])


def diagonal_region(p, tol=DEFAULT_TOL):
    """Region of ``diag(1, d1, d2, d3)``: outside the cube, cube only, or tetrahedron.

    Ties within ``tol`` resolve toward the more physical region.
    """
    d = _as_diag_params(p)
    if np.max(np.abs(d)) > 1.0 + tol:
        return DiagonalRegion.OUTSIDE_CUBE
    if np.all(tetrahedron_margins(d) <= 1.0 + tol):
        return DiagonalRegion.TETRAHEDRON
    return DiagonalRegion.CUBE_ONLY


def h_diagonal(p):
    """Closed-form H(M) of ``diag(1, d1, d2, d3)``."""
    d1, d2, d3 = _as_diag_params(p)
    return 0.5 * np.array([
        [1 + d1, 0, 0, d2 + d3],
        [0, 1 - d1, d2 - d3, 0],
        [0, d2 - d3, 1 - d1, 0],
        [d2 + d3, 0, 0, 1 + d1],
    ], dtype=complex)


def diag_region_scan(resolution, extent=1.1, tol=DEFAULT_TOL):
    """Evaluate :func:`diagonal_region` on a uniform grid over ``[-extent, extent]^3``.

    Returns a list of ``(d1, d2, d3, DiagonalRegion)`` in C order (d3 fastest).
    """
    resolution = int(resolution)
    if resolution < 2:
        raise InvalidInputError("resolution must be >= 2")
    axis = np.linspace(-extent, extent, resolution)
    return [(float(a), float(b), float(c), diagonal_region((a, b, c), tol))
            for a, b, c in itertools.product(axis, repeat=3)]
