"""Physicality tests for Mueller matrices via the associated Hermitian matrix H(M)."""
from .cone import (ClassificationResult, ConeScanConfig, DiagonalRegion, MatrixKind,
                   classify, cone_minimum, diag_region_scan, diagonal_region, h_diagonal,
                   is_pre_mueller)
from .entanglement import (apply_mueller_to_bcp, bcp_from_ensemble, bcp_from_pure, bell_state,
                           concurrence, is_separable, product_state, witness_negativity)
from .errors import ConsistencyError, InvalidInputError, NotPhysicalError
from .mueller import (JonesDecomposition, apply_mueller, decompose_convex, h_from_mueller,
                      is_mueller_jones, mueller_from_h, mueller_jones_from_jones)
from .polarization import (A_MATRIX, G_METRIC, TAU, JonesVector, StokesClass,
                           coherency_from_ensemble, coherency_from_stokes, jones_apply,
                           jones_apply_coherency, stokes_from_coherency, validate_stokes)

__version__ = "0.1.0"
