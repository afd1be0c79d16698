"""Exhaustive pair scan: the best 2x2 submatrix by smallest Gram eigenvalue."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .linalg import all_pair_lambda2, as_array, gram_eigs

# Pairs whose lam2 is within this relative window of the maximum count as
# tied; the lexicographically first of them is reported.
TIE_RTOL = 1e-12


@dataclass(frozen=True)
class OracleResult:
    best_pair: tuple[int, int]
    lambda2_max: float
    table: np.ndarray | None = None  # (n, n) symmetric lam2 table if requested

    @property
    def inv_norm_min(self) -> float:
        return 1.0 / math.sqrt(self.lambda2_max) if self.lambda2_max > 0 else math.inf

    def table_rows(self):
        """(i, j, lambda2) for i < j in lexicographic order."""
        if self.table is None:
            return
        n = self.table.shape[0]
        for i in range(n):
            for j in range(i + 1, n):
                yield i, j, float(self.table[i, j])


def _block_lambda2(A: np.ndarray, nrm: np.ndarray, lo: int, hi: int) -> np.ndarray:
    """lam2 for rows lo..hi-1 against all rows; entries with j <= i set to -1."""
    blk = A[lo:hi]
    tr = nrm[lo:hi, None] + nrm[None, :]
    b2 = np.abs(blk @ A.conj().T) ** 2
    det = np.abs(np.outer(blk[:, 0], A[:, 1]) - np.outer(blk[:, 1], A[:, 0])) ** 2
    disc = np.maximum((nrm[lo:hi, None] - nrm[None, :]) ** 2 + 4.0 * b2, 0.0)
    lam1 = 0.5 * (tr + np.sqrt(disc))
    with np.errstate(invalid="ignore", divide="ignore"):
        lam2 = np.where(lam1 > 0, det / lam1, 0.0)
    rows = np.arange(lo, hi)[:, None]
    lam2[np.arange(A.shape[0])[None, :] <= rows] = -1.0
    return lam2


def brute_force_best_pair(U, keep_table: bool = False, threads: int = 1, block: int = 512) -> OracleResult:
    A = as_array(U)
    n = A.shape[0]
    if keep_table:
        table = all_pair_lambda2(A)
        iu, ju = np.triu_indices(n, k=1)
        vals = table[iu, ju]
        m = float(vals.max())
        k = int(np.flatnonzero(vals >= m - TIE_RTOL * m)[0])
        return OracleResult((int(iu[k]), int(ju[k])), m, table)

    nrm = np.sum(A.real**2 + A.imag**2, axis=1)
    starts = list(range(0, n, block))

    def scan(lo):
        lam2 = _block_lambda2(A, nrm, lo, min(lo + block, n))
        return float(lam2.max()), lo, lam2

    if threads > 1 and len(starts) > 1:
        with ThreadPoolExecutor(threads) as ex:
            parts = list(ex.map(scan, starts))  # map preserves block order
    else:
        parts = [scan(lo) for lo in starts]
    m = max(p[0] for p in parts)
    # deterministic merge: first block, first row-major entry inside the tie window
    for _, lo, lam2 in parts:
        hits = np.flatnonzero(lam2.ravel() >= m - TIE_RTOL * m)
        if hits.size:
            i, j = divmod(int(hits[0]), n)
            return OracleResult((lo + i, j), m)
    raise AssertionError("unreachable: max not found")


def pair_lambda2(A: np.ndarray, i: int, j: int) -> float:
    ui, uj = A[i], A[j]
    a = float(np.sum(np.abs(ui) ** 2))
    d = float(np.sum(np.abs(uj) ** 2))
    b2 = abs(np.vdot(uj, ui)) ** 2
    det = float(abs(ui[0] * uj[1] - ui[1] * uj[0]) ** 2)
    return gram_eigs(a, d, b2, det)[1]


@dataclass(frozen=True)
class GapReport:
    oracle_lambda2: float
    certified_lambda2: float
    ratio: float
    oracle_pair: tuple[int, int]
    certified_pair: tuple[int, int]

    @property
    def consistent(self) -> bool:
        return self.certified_lambda2 <= self.oracle_lambda2 + 1e-12


def compare_with_certified(U) -> GapReport:
    from .selection import select_certified

    orc = brute_force_best_pair(U)
    sel = select_certified(U)
    lam_c = sel.sigma2**2
    rep = GapReport(
        oracle_lambda2=orc.lambda2_max,
        certified_lambda2=lam_c,
        ratio=lam_c / orc.lambda2_max if orc.lambda2_max > 0 else math.nan,
        oracle_pair=orc.best_pair,
        certified_pair=(sel.i, sel.j),
    )
    if not rep.consistent:
        raise AssertionError(
            f"certified lam2 {lam_c!r} exceeds oracle max {orc.lambda2_max!r}"
        )
    return rep
