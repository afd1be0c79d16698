"""Hopf map between matrix rows in C^2 and vectors in R^3.

p(u, v) = (conj(u) v + u conj(v), i (conj(u) v - u conj(v)), |u|^2 - |v|^2)

maps a row of norm^2 rho to a vector of length rho. For an n x 2 matrix
with orthonormal columns the images w_i satisfy sum w_i = 0 and
sum |w_i| = 2, and the converse holds for row-wise lifts.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .constants import TOL_CFG
from .errors import ConfigInvalid, NonFinite
from .linalg import OrthoMatrix, as_array, validate_ortho


def hopf_map(u) -> np.ndarray:
    """Hopf image of a single row (u, v) or of every row of an (n, 2) array."""
    u = np.asarray(u, dtype=complex)
    if not np.all(np.isfinite(u)):
        raise NonFinite("non-finite row")
    a, b = u[..., 0], u[..., 1]
    cross = np.conj(a) * b
    return np.stack(
        [2.0 * cross.real, -2.0 * cross.imag, np.abs(a) ** 2 - np.abs(b) ** 2], axis=-1
    )


def hopf_lift(w) -> np.ndarray:
    """Row (u, v) with hopf_map((u, v)) == w and u real nonnegative.

    Works on a single 3-vector or on an (n, 3) array.
    """
    w = np.asarray(w, dtype=float)
    if not np.all(np.isfinite(w)):
        raise NonFinite("non-finite vector")
    single = w.ndim == 1
    W = np.atleast_2d(w)
    r = np.linalg.norm(W, axis=1)
    xy = W[:, 0] - 1j * W[:, 1]  # = 2 conj(u) v
    out = np.zeros((W.shape[0], 2), dtype=complex)
    # Each hemisphere uses the formula whose square root argument is >= r.
    north = (W[:, 2] >= 0) & (r > 0)
    u = np.sqrt(0.5 * (r[north] + W[north, 2]))
    out[north, 0] = u
    out[north, 1] = xy[north] / (2.0 * u)
    south = W[:, 2] < 0
    v = np.sqrt(0.5 * (r[south] - W[south, 2]))
    u_s = np.conj(xy[south]) / (2.0 * v)
    # global phase making the first component real >= 0
    # (angle avoids complex division, which breaks down for subnormal u_s)
    out[south, 0] = np.abs(u_s)
    out[south, 1] = v * np.exp(-1j * np.angle(u_s))
    return out[0] if single else out


@dataclass(frozen=True)
class RowConfig:
    """Hopf images w (n x 3) of the rows; r_i = |w_i|."""

    w: np.ndarray

    @property
    def n(self) -> int:
        return self.w.shape[0]

    @property
    def r(self) -> np.ndarray:
        return np.linalg.norm(self.w, axis=1)

    def residuals(self) -> tuple[float, float]:
        """(|sum w_i|_inf, |sum r_i - 2|)."""
        return float(np.max(np.abs(self.w.sum(axis=0)))), abs(float(self.r.sum()) - 2.0)


def make_config(w, tol: float = TOL_CFG, validate: bool = True) -> RowConfig:
    W = np.array(w, dtype=float)
    if W.ndim != 2 or W.shape[1] != 3:
        raise ConfigInvalid(f"expected an n x 3 array, got shape {W.shape}")
    if not np.all(np.isfinite(W)):
        raise NonFinite("config has NaN or Inf entries")
    if W.shape[0] < 3:
        raise ConfigInvalid(f"need n >= 3 vectors, got {W.shape[0]}")
    W.setflags(write=False)
    cfg = RowConfig(W)
    if validate:
        closure, perim = cfg.residuals()
        if closure > tol or perim > tol:
            raise ConfigInvalid(
                f"sum w = {closure:.3e} and sum |w| - 2 = {perim:.3e} (tol {tol:.1e})"
            )
    return cfg


def config_from_matrix(U) -> RowConfig:
    return make_config(hopf_map(as_array(U)), validate=False)


def matrix_from_config(cfg: RowConfig | np.ndarray, tol: float = TOL_CFG) -> OrthoMatrix:
    if not isinstance(cfg, RowConfig):
        cfg = make_config(cfg, tol)
    else:
        make_config(cfg.w, tol)
    return validate_ortho(hopf_lift(cfg.w), tol=10 * tol)


def transfer_identity_check(U) -> float:
    """max_ij | |<u_i,u_j>|^2 - r_i r_j / 2 - (w_i, w_j) / 2 |."""
    A = as_array(U)
    W = hopf_map(A)
    r = np.linalg.norm(W, axis=1)
    lhs = np.abs(A @ A.conj().T) ** 2
    rhs = 0.5 * np.outer(r, r) + 0.5 * (W @ W.T)
    return float(np.max(np.abs(lhs - rhs)))


def random_config(n: int, rng: np.random.Generator) -> RowConfig:
    """Gaussian vectors, mean-subtracted, rescaled to total length 2.

    A mean-subtracted vector may come out zero; that is still a valid
    configuration.
    """
    W = rng.standard_normal((n, 3))
    W -= W.mean(axis=0)
    total = np.linalg.norm(W, axis=1).sum()
    if total == 0.0:
        raise ConfigInvalid("all vectors vanished after centering")
    W *= 2.0 / total
    return make_config(W)
