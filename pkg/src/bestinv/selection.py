"""Certified row-pair selection.

Small rows (squared norm <= alpha/n) are deflated one at a time: rotate the
row onto the first axis, drop it, and rescale the first column by
t = 1/sqrt(1 - v^2) so the remaining n-1 rows are orthonormal again. Any
pair certified for the reduced matrix keeps sigma_2 >= sigma_2(reduced)/t,
which is strictly better than needed. Once every row is large, the
certificate matrix supplies the pair directly. Three rows are scanned
exhaustively.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .certificate import select_case_b
from .constants import ALPHA, bound
from .errors import PreconditionViolated
from .hopf import config_from_matrix
from .linalg import (
    OrthoMatrix,
    as_array,
    ortho_deviation,
    orthonormalize,
    pair_gram,
    _rotate,
    validate_ortho,
)
from .oracle import pair_lambda2

REORTH_TOL = 1e-11


@dataclass(frozen=True)
class CaseAStep:
    removed_row: int
    v: float
    t: float
    kind: str = "CaseA"


@dataclass(frozen=True)
class CaseBStep:
    i: int
    j: int
    m_value: float
    kind: str = "CaseB"


@dataclass(frozen=True)
class BaseCaseStep:
    n: int = 3
    kind: str = "BaseCase"


@dataclass(frozen=True)
class Selection:
    i: int
    j: int
    n: int
    sigma2: float
    inv_norm: float
    bound: float
    path: list = field(default_factory=list)

    @property
    def depth(self) -> int:
        return sum(isinstance(s, CaseAStep) for s in self.path)

    def to_json(self, trace: bool = True) -> dict:
        out = {
            "i": self.i,
            "j": self.j,
            "n": self.n,
            "sigma2": self.sigma2,
            "invNorm": self.inv_norm,
            "bound": self.bound,
        }
        out["path"] = [asdict(s) for s in self.path] if trace else [s.kind for s in self.path]
        return out


def case_a_step(U, i: int) -> tuple[OrthoMatrix, float, np.ndarray]:
    """Deflate small row i. Returns (reduced matrix, v = ||u_i||, original indices of kept rows)."""
    A = as_array(U)
    n = A.shape[0]
    nrm2 = float(np.sum(np.abs(A[i]) ** 2))
    if nrm2 == 0.0:
        raise PreconditionViolated(f"row {i} is zero; delete it instead of rotating")
    if nrm2 > ALPHA / n:
        raise PreconditionViolated(f"row {i} has squared norm {nrm2:.6g} > alpha/n = {ALPHA / n:.6g}")
    V, v = _rotate(A, i)
    keep = _drop(np.arange(n), i)
    t = 1.0 / math.sqrt(1.0 - v * v)
    R = _drop(V, i)
    R[:, 0] *= t
    dev = ortho_deviation(R)
    if dev > REORTH_TOL:
        R = orthonormalize(R)
        dev = ortho_deviation(R)
    R.setflags(write=False)
    return OrthoMatrix(R, dev), v, keep


def _drop(x: np.ndarray, k: int) -> np.ndarray:
    out = np.empty((x.shape[0] - 1,) + x.shape[1:], dtype=x.dtype)
    out[:k] = x[:k]
    out[k:] = x[k + 1 :]
    return out


def _best_of_three(A: np.ndarray) -> tuple[int, int]:
    best, pair = -1.0, (0, 1)
    for p, q in ((0, 1), (0, 2), (1, 2)):
        lam = pair_lambda2(A, p, q)
        if lam > best:
            best, pair = lam, (p, q)
    return pair


def select_certified(U) -> Selection:
    U0 = U if isinstance(U, OrthoMatrix) else validate_ortho(U)
    A0 = U0.data
    n0 = A0.shape[0]
    A = A0
    labels = np.arange(n0)
    path: list = []
    while True:
        n = A.shape[0]
        if n == 3:
            p, q = _best_of_three(A)
            path.append(BaseCaseStep())
            break
        nrm2 = np.sum(A.real**2 + A.imag**2, axis=1)
        k = int(np.argmin(nrm2))
        if nrm2[k] <= ALPHA / n:
            if nrm2[k] == 0.0:
                path.append(CaseAStep(int(labels[k]), 0.0, 1.0))
                A = _drop(A, k)
            else:
                R, v, _ = case_a_step(A, k)
                path.append(CaseAStep(int(labels[k]), v, 1.0 / math.sqrt(1.0 - v * v)))
                A = R.data
            labels = _drop(labels, k)
            continue
        p, q, m = select_case_b(config_from_matrix(A))
        path.append(CaseBStep(int(labels[p]), int(labels[q]), m))
        break
    i, j = sorted((int(labels[p]), int(labels[q])))
    pg = pair_gram(A0, i, j)
    return Selection(i, j, n0, pg.sigma2, pg.inv_norm, bound(n0), path)


@dataclass(frozen=True)
class VerifyReport:
    passed: bool
    sigma2_recomputed: float
    sigma2_residual: float
    inv_norm_over_bound: float
    failures: list

    def to_json(self) -> dict:
        return asdict(self)


def verify_bound(U, sel: Selection, rtol: float = 1e-9) -> VerifyReport:
    A = as_array(U)
    n = A.shape[0]
    failures = []
    try:
        pg = pair_gram(A, sel.i, sel.j)
    except Exception as exc:  # bad indices are a failed verification, not a crash
        return VerifyReport(False, math.nan, math.inf, math.inf, [f"pair: {exc}"])
    s2 = pg.sigma2
    resid = abs(sel.sigma2**2 - pg.lam2)
    if resid > 1e-12:
        failures.append(f"sigma2 mismatch: stored {sel.sigma2!r}, recomputed {s2!r}")
    b = bound(n)
    if sel.n != n:
        failures.append(f"selection is for n={sel.n}, matrix has n={n}")
    if abs(sel.bound - b) > 1e-12 * b:
        failures.append(f"stored bound {sel.bound!r} != sqrt(n/alpha) = {b!r}")
    inv = pg.inv_norm
    if not inv <= b * (1 + rtol):
        failures.append(f"inverse norm {inv!r} exceeds bound {b!r}")
    if sel.sigma2 > 0 and abs(sel.inv_norm * sel.sigma2 - 1.0) > 1e-12:
        failures.append("invNorm != 1/sigma2")
    return VerifyReport(not failures, s2, resid, inv / b, failures)
