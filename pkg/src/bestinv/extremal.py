"""Equality configurations: four clusters of n/4 equal Hopf vectors on a regular tetrahedron."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .certificate import build_certificate
from .constants import TOL_CFG
from .errors import NotDivisibleBy4
from .hopf import RowConfig, make_config, matrix_from_config
from .linalg import OrthoMatrix

TETRA = np.array([[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]], dtype=float) / np.sqrt(3.0)


def random_rotation(seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    Q, R = np.linalg.qr(rng.standard_normal((3, 3)))
    return Q * np.sign(np.diag(R))


def tetrahedron_config(n: int, rotation: np.ndarray | None = None) -> RowConfig:
    if n < 4 or n % 4:
        raise NotDivisibleBy4(f"equality configurations need 4 | n, got n={n}")
    dirs = TETRA if rotation is None else TETRA @ np.asarray(rotation, dtype=float).T
    w = np.repeat(dirs * (2.0 / n), n // 4, axis=0)
    return make_config(w)


def extremal_matrix(n: int, rotate_seed: int | None = None) -> OrthoMatrix:
    rot = None if rotate_seed is None else random_rotation(rotate_seed)
    return matrix_from_config(tetrahedron_config(n, rot))


@dataclass
class EqualityVerdict:
    equality: bool
    checks: dict = field(default_factory=dict)
    reasons: list = field(default_factory=list)
    eig_P: np.ndarray | None = None
    eig_M: np.ndarray | None = None
    block_sizes: list = field(default_factory=list)

    @property
    def label(self) -> str:
        return "EQUALITY" if self.equality else "NOT_EQUALITY"

    def to_json(self) -> dict:
        return {
            "verdict": self.label,
            "checks": dict(self.checks),
            "reasons": list(self.reasons),
            "block_sizes": list(self.block_sizes),
        }


def validate_equality_case(cfg, tol: float = TOL_CFG) -> EqualityVerdict:
    """Run the full battery of necessary conditions for an equality configuration.

    (a) equal lengths 2/n, (b) P spectrum {4/n, -4/(3n) x3, 0...},
    (c) M spectrum {4/(3n) x4, 0...}, (d) M >= 0 with a zero entry,
    (e) M splits into four all-equal blocks of size n/4.

    Passing every check is evidence for, not a proof of, the equality case.
    """
    cert = build_certificate(cfg, tol)
    n = cert.n
    P, M, r = cert.P, cert.M, cert.r
    eig_P = np.linalg.eigvalsh(P)
    eig_M = np.linalg.eigvalsh(M)
    v = EqualityVerdict(False, eig_P=eig_P, eig_M=eig_M)

    v.checks["a_equal_lengths"] = bool(np.max(np.abs(r - 2.0 / n)) <= 1e-10)

    if n >= 4:
        want_P = np.concatenate([np.full(3, -4.0 / (3 * n)), np.zeros(n - 4), [4.0 / n]])
        want_M = np.concatenate([np.zeros(n - 4), np.full(4, 4.0 / (3 * n))])
        v.checks["b_P_spectrum"] = bool(np.max(np.abs(eig_P - want_P)) <= 1e-9)
        v.checks["c_M_spectrum"] = bool(np.max(np.abs(eig_M - want_M)) <= 1e-9)
    else:
        v.checks["b_P_spectrum"] = v.checks["c_M_spectrum"] = False

    v.checks["d_M_nonneg_with_zero"] = bool(M.min() >= -1e-12 and M.min() <= 1e-12)

    ncomp, labels = connected_components(csr_matrix(M > 1e-9), directed=False)
    sizes = np.bincount(labels, minlength=ncomp)
    v.block_sizes = sorted(int(s) for s in sizes)
    blocks_ok = ncomp == 4 and n % 4 == 0 and np.all(sizes == n // 4)
    if blocks_ok:
        same = labels[:, None] == labels[None, :]
        k = n // 4
        target = 4.0 / (3 * n) / k
        blocks_ok = bool(
            np.max(np.abs(M[same] - target)) <= 1e-9 and np.max(np.abs(M[~same])) <= 1e-9
        )
    v.checks["e_four_equal_blocks"] = bool(blocks_ok)

    v.reasons = [name for name, ok in v.checks.items() if not ok]
    v.equality = not v.reasons
    return v
