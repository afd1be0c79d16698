"""Closed polygons of perimeter 2 in R^3 and the pairwise gap |w_i| + |w_j| - |w_i + w_j|.

The edge vectors of such a polygon are exactly a row configuration, and the
best pair's gap is at least 2*alpha/n.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .constants import ALPHA, TOL_CFG
from .errors import PolygonInvalid
from .extremal import EqualityVerdict, validate_equality_case
from .hopf import hopf_map
from .linalg import as_array


def _p_stable(wi, wj, ri, rj):
    # r_i r_j - (w_i, w_j) = | r_j w_i - r_i w_j |^2 / (2 r_i r_j), no cancellation
    d = rj * wi - ri * wj
    return float(d @ d) / (2.0 * ri * rj)


def gap(wi, wj, eps: float = 1e-300) -> float:
    wi = np.asarray(wi, dtype=float)
    wj = np.asarray(wj, dtype=float)
    ri, rj = float(np.linalg.norm(wi)), float(np.linalg.norm(wj))
    if ri == 0.0 or rj == 0.0:
        return 0.0
    denom = ri + rj + float(np.linalg.norm(wi + wj))
    if denom <= eps:
        return 0.0
    return 2.0 * _p_stable(wi, wj, ri, rj) / denom


def gap_table(w: np.ndarray) -> np.ndarray:
    """Symmetric n x n gap table, vectorised form of :func:`gap`."""
    w = np.asarray(w, dtype=float)
    r = np.linalg.norm(w, axis=1)
    diff = r[None, :, None] * w[:, None, :] - r[:, None, None] * w[None, :, :]
    rr = np.outer(r, r)
    with np.errstate(invalid="ignore", divide="ignore"):
        P = np.where(rr > 0, np.sum(diff * diff, axis=2) / (2.0 * rr), 0.0)
    s = np.linalg.norm(w[:, None, :] + w[None, :, :], axis=2)
    denom = r[:, None] + r[None, :] + s
    with np.errstate(invalid="ignore", divide="ignore"):
        return np.where(denom > 0, 2.0 * P / denom, 0.0)


@dataclass(frozen=True)
class Polygon:
    edges: np.ndarray

    @property
    def n(self) -> int:
        return self.edges.shape[0]

    @classmethod
    def from_edges(cls, edges, normalize: bool = False, tol: float = TOL_CFG) -> "Polygon":
        E = np.array(edges, dtype=float)
        if E.ndim != 2 or E.shape[1] != 3 or E.shape[0] < 3:
            raise PolygonInvalid(f"expected n >= 3 edge vectors in R^3, got shape {E.shape}")
        if not np.all(np.isfinite(E)):
            raise PolygonInvalid("non-finite edge coordinates")
        if normalize:
            per = np.linalg.norm(E, axis=1).sum()
            if per == 0:
                raise PolygonInvalid("zero perimeter")
            E *= 2.0 / per
        closure = float(np.max(np.abs(E.sum(axis=0))))
        per = float(np.linalg.norm(E, axis=1).sum())
        if closure > tol:
            raise PolygonInvalid(f"polygon not closed: |sum w| = {closure:.3e}")
        if abs(per - 2.0) > tol:
            raise PolygonInvalid(f"perimeter {per!r} != 2 (pass normalize=True to rescale)")
        E.setflags(write=False)
        return cls(E)

    @classmethod
    def from_vertices(cls, vertices, normalize: bool = False, tol: float = TOL_CFG) -> "Polygon":
        V = np.asarray(vertices, dtype=float)
        if V.ndim != 2 or V.shape[1] != 3:
            raise PolygonInvalid(f"expected vertices in R^3, got shape {V.shape}")
        return cls.from_edges(np.roll(V, -1, axis=0) - V, normalize, tol)


@dataclass(frozen=True)
class CorollaryReport:
    n: int
    max_gap: float
    pair: tuple[int, int]
    bound: float
    ratio: float
    verdict: EqualityVerdict

    @property
    def holds(self) -> bool:
        return self.max_gap >= self.bound - 1e-10

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "maxGap": self.max_gap,
            "pair": list(self.pair),
            "bound": self.bound,
            "ratio": self.ratio,
            "holds": self.holds,
            "verdict": self.verdict.label,
            "failed_checks": list(self.verdict.reasons),
        }


def check_corollary(poly: Polygon) -> CorollaryReport:
    if not isinstance(poly, Polygon):
        poly = Polygon.from_edges(poly)
    n = poly.n
    G = gap_table(poly.edges)
    iu, ju = np.triu_indices(n, k=1)
    vals = G[iu, ju]
    k = int(np.argmax(vals))
    b = 2.0 * ALPHA / n
    return CorollaryReport(
        n=n,
        max_gap=float(vals[k]),
        pair=(int(iu[k]), int(ju[k])),
        bound=b,
        ratio=float(vals[k]) / b,
        verdict=validate_equality_case(poly.edges),
    )


def gap_consistency(U) -> float:
    """max_ij | 2 P_ij - ((r_i + r_j)^2 - |w_i + w_j|^2) | over the Hopf images of U's rows."""
    W = hopf_map(as_array(U))
    r = np.linalg.norm(W, axis=1)
    P = np.outer(r, r) - W @ W.T
    s2 = np.sum((W[:, None, :] + W[None, :, :]) ** 2, axis=2)
    return float(np.max(np.abs(2.0 * P - ((r[:, None] + r[None, :]) ** 2 - s2))))
