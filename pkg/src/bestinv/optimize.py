"""Numerical estimates of a_n = inf_U max_{i<j} lam2(U_ij U_ij^H) and b_n = 1/sqrt(a_n).

Each restart runs two stages:

1. perturb-and-retract random search: add scaled complex Gaussian noise to a
   random subset of rows, re-orthonormalize, keep the move if the exact
   max-pair objective drops; the step halves after ``patience`` consecutive
   rejections.
2. basin hopping over an SLSQP polish of the epigraph problem
   ``min z  s.t.  lam2_ij(U) <= z,  U^H U = I``. The max-of-pairs objective
   is nonsmooth exactly at its minimizers (many tied pairs), which stalls
   stage 1; the epigraph form is smooth. Every polished point is retracted
   and re-scored with the exact objective before it can be accepted.
"""

from __future__ import annotations

import csv
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from .constants import ALPHA, bound
from .errors import DegenerateSample
from .extremal import extremal_matrix
from .linalg import OrthoMatrix, all_pair_lambda2, orthonormalize, random_ortho, validate_ortho

PATIENCE = 50
STEP_FLOOR = 1e-9


def max_pair_lambda2(A: np.ndarray) -> float:
    return float(all_pair_lambda2(A).max())


@dataclass
class TightnessEstimate:
    n: int
    a_estimate: float
    restarts: int
    best_matrix: OrthoMatrix
    best_restart: int = 0
    iteration_log: list = field(default_factory=list)

    @property
    def b_estimate(self) -> float:
        return 1.0 / math.sqrt(self.a_estimate)

    @property
    def bound(self) -> float:
        return bound(self.n)

    @property
    def ratio(self) -> float:
        return self.bound / self.b_estimate

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "a_est": self.a_estimate,
            "b_est": self.b_estimate,
            "bound": self.bound,
            "ratio": self.ratio,
            "alpha_over_n": ALPHA / self.n,
            "restarts": self.restarts,
            "best_restart": self.best_restart,
            "log": [list(e) for e in self.iteration_log],
        }


# --- smooth pieces for the polish stage -------------------------------------

def _unpack(x: np.ndarray, n: int) -> np.ndarray:
    return x[: 2 * n].reshape(n, 2) + 1j * x[2 * n : 4 * n].reshape(n, 2)


def pair_lambda2_vec(U: np.ndarray, iu: np.ndarray, ju: np.ndarray) -> np.ndarray:
    nr = np.sum(U.real**2 + U.imag**2, axis=1)
    a, d = nr[iu], nr[ju]
    b2 = np.abs(np.sum(U[iu] * U[ju].conj(), axis=1)) ** 2
    return 0.5 * (a + d) - np.sqrt(0.25 * (a - d) ** 2 + b2)


def pair_lambda2_jac(U: np.ndarray, iu: np.ndarray, ju: np.ndarray) -> np.ndarray:
    """Jacobian of pair_lambda2_vec w.r.t. the real vector (Re U.ravel(), Im U.ravel())."""
    n = U.shape[0]
    m = iu.size
    nr = np.sum(U.real**2 + U.imag**2, axis=1)
    a, d = nr[iu], nr[ju]
    b = np.sum(U[iu] * U[ju].conj(), axis=1)
    q = np.maximum(np.sqrt(0.25 * (a - d) ** 2 + np.abs(b) ** 2), 1e-300)
    ca = 0.5 - (a - d) / (4 * q)
    cd = 0.5 + (a - d) / (4 * q)
    cb = -1.0 / (2 * q)
    # complex g with d(lam2) = Re(conj(g) . dU)
    g = np.zeros((m, n, 2), dtype=complex)
    rows = np.arange(m)
    g[rows, iu] += (2 * ca)[:, None] * U[iu] + (2 * cb * b)[:, None] * U[ju]
    g[rows, ju] += (2 * cd)[:, None] * U[ju] + (2 * cb * np.conj(b))[:, None] * U[iu]
    return np.concatenate([g.real.reshape(m, -1), g.imag.reshape(m, -1)], axis=1)


def _ortho_residual(x: np.ndarray, n: int) -> np.ndarray:
    U = _unpack(x, n)
    G = U.conj().T @ U
    return np.array([G[0, 0].real - 1, G[1, 1].real - 1, G[0, 1].real, G[0, 1].imag])


def _ortho_jac(x: np.ndarray, n: int) -> np.ndarray:
    U = _unpack(x, n)
    c1, c2 = U[:, 0], U[:, 1]
    J = np.zeros((4, n, 2), dtype=complex)
    J[0, :, 0] = 2 * c1
    J[1, :, 1] = 2 * c2
    # Re/Im of <c1, c2> = sum conj(c1) c2
    J[2, :, 0] = c2
    J[2, :, 1] = c1
    J[3, :, 0] = -1j * c2
    J[3, :, 1] = 1j * c1
    return np.concatenate([J.real.reshape(4, -1), J.imag.reshape(4, -1)], axis=1)


def polish(A: np.ndarray, maxiter: int = 500) -> tuple[np.ndarray, float]:
    """SLSQP on the epigraph problem, then retraction and exact re-scoring."""
    n = A.shape[0]
    iu, ju = np.triu_indices(n, k=1)
    ones = np.ones((iu.size, 1))
    nv = 4 * n
    cons = [
        {
            "type": "ineq",
            "fun": lambda y: y[-1] - pair_lambda2_vec(_unpack(y, n), iu, ju),
            "jac": lambda y: np.hstack([-pair_lambda2_jac(_unpack(y, n), iu, ju), ones]),
        },
        {
            "type": "eq",
            "fun": lambda y: _ortho_residual(y, n),
            "jac": lambda y: np.hstack([_ortho_jac(y, n), np.zeros((4, 1))]),
        },
    ]
    grad = np.zeros(nv + 1)
    grad[-1] = 1.0
    y0 = np.concatenate([A.real.ravel(), A.imag.ravel(), [max_pair_lambda2(A)]])
    res = minimize(
        lambda y: y[-1], y0, jac=lambda y: grad, constraints=cons, method="SLSQP",
        options={"maxiter": maxiter, "ftol": 1e-15},
    )
    B = orthonormalize(_unpack(res.x, n))
    return B, max_pair_lambda2(B)


# --- per-restart driver -------------------------------------------------------

def _noise(rng: np.random.Generator, n: int) -> np.ndarray:
    G = (rng.standard_normal((n, 2)) + 1j * rng.standard_normal((n, 2))) / math.sqrt(2.0)
    k = int(rng.integers(1, n + 1))
    mask = np.zeros(n, dtype=bool)
    mask[rng.choice(n, size=k, replace=False)] = True
    return G * mask[:, None]


def _run_restart(n, start, iters, hops, rng, patience=PATIENCE):
    A = start
    f = max_pair_lambda2(A)
    log = [("start", 0, f, 0.0)]
    step = 0.5 / math.sqrt(n)
    rejects = 0
    for it in range(1, iters + 1):
        try:
            B = orthonormalize(A + step * _noise(rng, n))
        except DegenerateSample:
            rejects += 1
            continue
        fb = max_pair_lambda2(B)
        if fb < f:
            A, f = B, fb
            rejects = 0
            log.append(("search", it, f, step))
        else:
            rejects += 1
            if rejects >= patience:
                step = max(step / 2, STEP_FLOOR)
                rejects = 0
    if hops > 0:
        B, fb = polish(A)
        if fb < f:
            A, f = B, fb
            log.append(("polish", 0, f, 0.0))
        for h in range(1, hops + 1):
            C = orthonormalize(A + 0.5 / math.sqrt(n) * _noise(rng, n))
            B, fb = polish(C)
            if fb < f:
                A, f = B, fb
                log.append(("hop", h, f, 0.0))
    return A, f, log


def estimate_a_n(
    n: int,
    restarts: int = 8,
    iters: int = 5000,
    seed: int = 0,
    warm_extremal: bool = False,
    hops: int = 40,
    threads: int = 1,
) -> TightnessEstimate:
    """Minimize the best-pair lam2 over orthonormal-column matrices.

    Restart k draws from its own stream ``default_rng([seed, k])``; with
    ``warm_extremal`` and 4 | n one more restart starts at the equality
    matrix. The reported estimate is the min over restarts (ties go to the
    lowest restart index), so it does not depend on ``threads``.
    """
    if n < 3:
        raise ValueError("n >= 3 required")
    if restarts < 1:
        raise ValueError("restarts >= 1 required")

    def job(k):
        rng = np.random.default_rng([seed, k])
        if k == restarts:
            start = np.array(extremal_matrix(n).data)
        else:
            start = np.array(random_ortho(n, rng).data)
        return _run_restart(n, start, iters, hops, rng)

    ks = list(range(restarts)) + ([restarts] if warm_extremal and n % 4 == 0 else [])
    if threads > 1:
        with ThreadPoolExecutor(threads) as ex:
            results = list(ex.map(job, ks))
    else:
        results = [job(k) for k in ks]
    best = min(range(len(ks)), key=lambda k: (results[k][1], k))
    A, f, _ = results[best]
    log = [(k, *entry) for k, res in zip(ks, results) for entry in res[2]]
    return TightnessEstimate(
        n=n,
        a_estimate=f,
        restarts=len(ks),
        best_matrix=validate_ortho(A, tol=1e-9),
        best_restart=ks[best],
        iteration_log=log,
    )


@dataclass
class SweepRow:
    n: int
    a_est: float
    b_est: float
    bound: float
    ratio: float
    nondecreasing: bool | None  # b_est(n) >= b_est(n-1) within noise; None on the first row


def tightness_sweep(
    n_max: int,
    restarts: int = 8,
    iters: int = 5000,
    seed: int = 0,
    hops: int = 40,
    warm_extremal: bool = False,
    threads: int = 1,
    n_min: int = 3,
    noise: float = 1e-6,
) -> list[SweepRow]:
    if n_max < 4:
        raise ValueError("n_max >= 4 required")
    rows: list[SweepRow] = []
    for n in range(n_min, n_max + 1):
        est = estimate_a_n(n, restarts, iters, seed, warm_extremal, hops, threads)
        mono = None if not rows else est.b_estimate >= rows[-1].b_est * (1 - noise)
        rows.append(SweepRow(n, est.a_estimate, est.b_estimate, est.bound, est.ratio, mono))
    return rows


def write_sweep_csv(rows: list[SweepRow], path) -> None:
    with open(path, "w", newline="") as fh:
        wr = csv.writer(fh)
        wr.writerow(["n", "a_est", "b_est", "bound", "ratio", "nondecreasing"])
        for r in rows:
            wr.writerow([r.n, repr(r.a_est), repr(r.b_est), repr(r.bound), repr(r.ratio),
                         "" if r.nondecreasing is None else int(r.nondecreasing)])
