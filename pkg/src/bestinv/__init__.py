"""Best-bounded-inverse 2x2 submatrices of complex n x 2 orthonormal-column matrices.

The package selects, certifies and stress-tests a row pair (i, j) of an
n x 2 matrix U with U^H U = I whose 2x2 submatrix has inverse spectral norm
at most sqrt(n / ALPHA), ALPHA = 2 - 2/sqrt(3).
"""

from .constants import ALPHA, bound, lambda_floor
from .errors import (
    BestInvError,
    CaseBPreconditionViolated,
    ConfigInvalid,
    DegenerateSample,
    IndexOutOfRange,
    NoNonpositiveEntry,
    NonFinite,
    NotDivisibleBy4,
    NotOrthonormal,
    PolygonInvalid,
    PreconditionViolated,
    SameIndex,
    TooFewRows,
    ZeroRow,
)
from .linalg import OrthoMatrix, PairGram, pair_gram, random_ortho, rotate_row_to_axis, validate_ortho
from .hopf import (
    RowConfig,
    config_from_matrix,
    hopf_lift,
    hopf_map,
    matrix_from_config,
    random_config,
    transfer_identity_check,
)
from .certificate import Certificate, build_certificate, lemma_diagnostics, select_case_b
from .oracle import OracleResult, brute_force_best_pair, compare_with_certified
from .selection import Selection, case_a_step, select_certified, verify_bound
from .extremal import extremal_matrix, tetrahedron_config, validate_equality_case
from .optimize import TightnessEstimate, estimate_a_n, tightness_sweep
from .polygon import Polygon, check_corollary, gap, gap_consistency

__version__ = "0.1.0"
FORMAT_VERSION = 1
