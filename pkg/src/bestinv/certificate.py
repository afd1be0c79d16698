"""Certificate matrix M over a row configuration and its diagnostic chain.

For Hopf images w_1..w_n (sum w = 0, sum |w| = 2), r_i = |w_i|,
tau = 2*alpha/n:

    M_ij = (w_i, w_j) - (r_i - tau)(r_j - tau) + tau^2 / 2
    P_ij = r_i r_j - (w_i, w_j)

M always has a nonpositive entry. Off the diagonal, M_ij <= 0 is the same
as chi_ij(alpha/n) >= 0 for the pair Gram characteristic polynomial, which
is what certifies a pair in the large-row case.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .constants import ALPHA, M_NONPOS_TOL, TOL_CFG
from .errors import CaseBPreconditionViolated, NoNonpositiveEntry
from .hopf import RowConfig, make_config


@dataclass(frozen=True)
class MinEntry:
    value: float
    i: int
    j: int


@dataclass(frozen=True)
class Certificate:
    n: int
    tau: float
    r: np.ndarray
    rho: np.ndarray
    M: np.ndarray
    P: np.ndarray
    R2: float
    F: float
    s: float  # e^T P e, equals 4/n on valid configs
    t: float  # e^T P^2 e = |Pe|^2, equals 4 R2 / n
    min_entry: MinEntry

    @property
    def lower_raw(self) -> float:
        """8 R2/n - 32/(3 n^2); F never drops below this."""
        n = self.n
        return 8.0 * self.R2 / n - 32.0 / (3.0 * n * n)

    @property
    def upper(self) -> float:
        """(8 alpha/n)(R2 - alpha/n); F would sit strictly below this if M were positive."""
        n = self.n
        return 8.0 * ALPHA / n * (self.R2 - ALPHA / n)

    def to_json(self) -> dict:
        me = self.min_entry
        return {
            "minEntry": {"i": me.i, "j": me.j, "value": me.value},
            "F": self.F,
            "R2": self.R2,
            "bounds": {"lower_raw": self.lower_raw, "upper": self.upper},
        }


def _as_config(cfg, tol: float) -> RowConfig:
    if isinstance(cfg, RowConfig):
        make_config(cfg.w, tol)
        return cfg
    return make_config(cfg, tol)


def build_certificate(cfg, tol: float = TOL_CFG) -> Certificate:
    cfg = _as_config(cfg, tol)
    w = np.asarray(cfg.w)
    n = cfg.n
    r = cfg.r
    tau = 2.0 * ALPHA / n
    G = w @ w.T
    G = 0.5 * (G + G.T)
    P = np.outer(r, r) - G
    M = G - np.outer(r - tau, r - tau) + 0.5 * tau * tau
    k = int(np.argmin(M))  # row-major: ties go to the smallest (i, j)
    i, j = divmod(k, n)
    Pe_sum = P.sum(axis=1)  # = sqrt(n) * P e
    return Certificate(
        n=n,
        tau=tau,
        r=r,
        rho=r - tau / 4.0,
        M=M,
        P=P,
        R2=float(r @ r),
        F=float(np.sum(P * P)),
        s=float(Pe_sum.sum()) / n,
        t=float(Pe_sum @ Pe_sum) / n,
        min_entry=MinEntry(float(M[i, j]), i, j),
    )


def select_case_b(cfg, tol: float = TOL_CFG) -> tuple[int, int, float]:
    """Row pair (i < j) with the most negative off-diagonal M entry.

    Returns ``(i, j, M_ij)``. Requires every r_i > alpha/n; under that
    assumption M_ii > 0, so the nonpositive entry the lemma guarantees is
    off the diagonal.
    """
    cfg = _as_config(cfg, tol)
    n = cfg.n
    r = cfg.r
    small = np.flatnonzero(r <= ALPHA / n)
    if small.size:
        raise CaseBPreconditionViolated(
            f"rows {small.tolist()} have squared norm <= alpha/n = {ALPHA / n:.6g}"
        )
    cert = build_certificate(cfg, tol)
    iu, ju = np.triu_indices(n, k=1)
    vals = cert.M[iu, ju]
    k = int(np.argmin(vals))
    if vals[k] > M_NONPOS_TOL:
        raise NoNonpositiveEntry(
            f"min off-diagonal M entry is {vals[k]:.3e} > {M_NONPOS_TOL:g}; configuration is invalid"
        )
    return int(iu[k]), int(ju[k]), float(vals[k])


@dataclass(frozen=True)
class SpectralDiagnostics:
    eig_P: np.ndarray  # ascending
    eig_M: np.ndarray  # ascending
    neg_count_P: int
    trace_P: float
    pe_residual: float  # |P e - (2/sqrt n) r|_inf


@dataclass(frozen=True)
class LemmaReport:
    certificate: Certificate
    spectral: SpectralDiagnostics
    # block split of P along span(e) + span(e)^perp
    block_s: float
    block_b_norm2: float
    trace_C2: float
    eig_C: np.ndarray
    alpha_quadratic_residual: float
    fsum_residual: float
    f_block_residual: float
    flags: dict = field(default_factory=dict)

    def bounds_tuple(self) -> tuple[float, float, float, float, float]:
        """(F, lower_raw, upper, R2, 4/n)."""
        c = self.certificate
        return c.F, c.lower_raw, c.upper, c.R2, 4.0 / c.n

    def to_json(self) -> dict:
        c = self.certificate
        out = c.to_json()
        out["R2_floor"] = 4.0 / c.n
        out["eig_P"] = self.spectral.eig_P.tolist()
        out["eig_M"] = self.spectral.eig_M.tolist()
        out["neg_count_P"] = self.spectral.neg_count_P
        out["trace_C2"] = self.trace_C2
        out["flags"] = dict(self.flags)
        return out


def _householder_to_e1(n: int) -> np.ndarray:
    """Symmetric orthogonal H with H e = e_1 for e = ones/sqrt(n)."""
    e = np.full(n, 1.0 / np.sqrt(n))
    v = e.copy()
    v[0] -= 1.0
    return np.eye(n) - 2.0 * np.outer(v, v) / (v @ v)


def lemma_diagnostics(cfg, tol: float = TOL_CFG, neg_tol: float = 1e-9) -> LemmaReport:
    cert = build_certificate(cfg, tol)
    n = cert.n
    P, M, r = cert.P, cert.M, cert.r
    eig_P = np.linalg.eigvalsh(P)
    eig_M = np.linalg.eigvalsh(M)
    pe = P.sum(axis=1) / np.sqrt(n)
    spectral = SpectralDiagnostics(
        eig_P=eig_P,
        eig_M=eig_M,
        neg_count_P=int(np.sum(eig_P < -neg_tol)),
        trace_P=float(np.trace(P)),
        pe_residual=float(np.max(np.abs(pe - 2.0 / np.sqrt(n) * r))),
    )

    H = _householder_to_e1(n)
    B = H @ P @ H
    B = 0.5 * (B + B.T)
    s_blk = float(B[0, 0])
    b = B[1:, 0]
    C = B[1:, 1:]
    eig_C = np.linalg.eigvalsh(C)
    trace_C2 = float(np.sum(C * C))

    a = ALPHA
    R2 = cert.R2
    recombined = 8 * a / n * (R2 - a / n) + 8 * (1 - a) / n * (R2 - 4.0 / n)
    s_exact = 4.0 / n
    neg_C = eig_C[eig_C < 0]
    flags = {
        "P_nonnegative": bool(P.min() >= -1e-12),
        "P_diag_zero": bool(np.max(np.abs(np.diag(P))) <= 1e-12),
        "row_sum_law": bool(np.max(np.abs(P.sum(axis=1) - 2 * r)) <= 1e-10),
        "trace_P_zero": abs(spectral.trace_P) <= 1e-10,
        "neg_eigs_P_at_most_3": spectral.neg_count_P <= 3,
        "neg_eigs_C_at_most_3": int(np.sum(eig_C < -neg_tol)) <= 3,
        "neg_mass_C_at_least_s": bool(-neg_C.sum() >= s_exact - 1e-10),
        "trace_C2_at_least_s2_over_3": trace_C2 >= s_exact**2 / 3 - 1e-10,
        "lower_raw": cert.F >= cert.lower_raw - 1e-10,
        "R2_floor": R2 >= 4.0 / n - 1e-12,
        "lower_final": cert.F >= cert.upper - 1e-10,
        "strict_upper": cert.F < cert.upper,
        "M_has_nonpositive": cert.min_entry.value <= M_NONPOS_TOL,
    }
    return LemmaReport(
        certificate=cert,
        spectral=spectral,
        block_s=s_blk,
        block_b_norm2=float(b @ b),
        trace_C2=trace_C2,
        eig_C=eig_C,
        alpha_quadratic_residual=a * a - 4 * a + 8.0 / 3.0,
        fsum_residual=abs(cert.lower_raw - recombined),
        f_block_residual=abs(cert.F - (2 * cert.t - cert.s**2 + trace_C2)),
        flags=flags,
    )
