"""Complex n x 2 orthonormal-column matrices and closed-form 2x2 Gram spectra."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .constants import TOL_ORTH
from .errors import (
    DegenerateSample,
    IndexOutOfRange,
    NonFinite,
    NotOrthonormal,
    SameIndex,
    TooFewRows,
    ZeroRow,
)


@dataclass(frozen=True)
class OrthoMatrix:
    """Validated n x 2 complex matrix with orthonormal columns.

    Construct through :func:`validate_ortho`; ``deviation`` is the max-abs
    entry of ``U^H U - I`` measured at validation time.
    """

    data: np.ndarray
    deviation: float = 0.0

    @property
    def n(self) -> int:
        return self.data.shape[0]

    @property
    def rows(self) -> np.ndarray:
        return self.data

    def row_norms2(self) -> np.ndarray:
        return np.sum(self.data.real**2 + self.data.imag**2, axis=1)

    def __array__(self, dtype=None, copy=None):
        return self.data if dtype is None else self.data.astype(dtype)


def as_array(U) -> np.ndarray:
    if isinstance(U, OrthoMatrix):
        return U.data
    return np.asarray(U, dtype=complex)


def ortho_deviation(A: np.ndarray) -> float:
    """max |(U^H U - I)_kl|."""
    c1, c2 = A[:, 0], A[:, 1]
    g11 = np.vdot(c1, c1).real
    g22 = np.vdot(c2, c2).real
    return max(abs(g11 - 1.0), abs(g22 - 1.0), abs(np.vdot(c1, c2)))


def validate_ortho(matrix, tol: float = TOL_ORTH) -> OrthoMatrix:
    A = np.array(as_array(matrix), dtype=complex)
    if A.ndim != 2 or A.shape[1] != 2:
        raise ValueError(f"expected an n x 2 array, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise NonFinite("matrix has NaN or Inf entries")
    if A.shape[0] < 3:
        raise TooFewRows(f"need n >= 3 rows, got {A.shape[0]}")
    dev = ortho_deviation(A)
    if dev > tol:
        raise NotOrthonormal(dev, tol)
    A.setflags(write=False)
    return OrthoMatrix(A, dev)


def orthonormalize(A: np.ndarray, rel_floor: float = 1e-8) -> np.ndarray:
    """Gram-Schmidt on the two columns with one re-orthogonalization pass.

    Raises DegenerateSample if a column is (numerically) dependent on the
    previous one.
    """
    A = np.array(A, dtype=complex)
    a1, a2 = A[:, 0], A[:, 1]
    n1 = np.linalg.norm(a1)
    if not n1 > 0:
        raise DegenerateSample("first column is zero")
    q1 = a1 / n1
    q1 = q1 / np.linalg.norm(q1)
    n2_in = np.linalg.norm(a2)
    for _ in range(2):
        a2 = a2 - q1 * np.vdot(q1, a2)
    n2 = np.linalg.norm(a2)
    if not n2 > rel_floor * n2_in:
        raise DegenerateSample("columns are nearly dependent")
    q2 = a2 / n2
    return np.column_stack([q1, q2])


def random_ortho(n: int, seed: int | np.random.Generator, max_tries: int = 10) -> OrthoMatrix:
    """Haar-distributed point of the complex Stiefel manifold V_2(C^n)."""
    if n < 3:
        raise TooFewRows(f"need n >= 3 rows, got {n}")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    for _ in range(max_tries):
        G = (rng.standard_normal((n, 2)) + 1j * rng.standard_normal((n, 2))) / math.sqrt(2.0)
        try:
            Q = orthonormalize(G)
        except DegenerateSample:
            continue
        return validate_ortho(Q)
    raise DegenerateSample(f"no usable Gaussian sample in {max_tries} tries")


@dataclass(frozen=True)
class PairGram:
    """Spectrum of Gamma_ij = U_ij U_ij^H for the rows (i, j)."""

    i: int
    j: int
    a: float
    d: float
    b: complex
    lam1: float
    lam2: float

    @property
    def sigma2(self) -> float:
        return math.sqrt(self.lam2)

    @property
    def inv_norm(self) -> float:
        return 1.0 / math.sqrt(self.lam2) if self.lam2 > 0 else math.inf

    @property
    def det(self) -> float:
        return self.lam1 * self.lam2


def gram_eigs(a: float, d: float, b_abs2: float, det: float | None = None) -> tuple[float, float]:
    """Eigenvalues (lam1 >= lam2) of the Hermitian [[a, b], [conj b, d]].

    lam1 comes from the closed form with the discriminant clamped at zero;
    lam2 is recovered as det/lam1, which keeps full relative accuracy when
    the rows are nearly collinear. Pass ``det`` when a cancellation-free
    value is known (|det U_ij|^2).
    """
    tr = a + d
    if det is None:
        det = a * d - b_abs2
    disc = max((a - d) ** 2 + 4.0 * b_abs2, 0.0)
    lam1 = 0.5 * (tr + math.sqrt(disc))
    if lam1 <= 0.0:
        return 0.0, 0.0
    lam2 = max(det, 0.0) / lam1
    return lam1, lam2


def _check_pair(n: int, i: int, j: int) -> None:
    for k in (i, j):
        if not 0 <= k < n:
            raise IndexOutOfRange(f"row index {k} outside [0, {n})")
    if i == j:
        raise SameIndex(f"pair needs two distinct rows, got ({i}, {j})")


def pair_gram(U, i: int, j: int) -> PairGram:
    A = as_array(U)
    _check_pair(A.shape[0], i, j)
    ui, uj = A[i], A[j]
    a = float(np.sum(np.abs(ui) ** 2))
    d = float(np.sum(np.abs(uj) ** 2))
    b = complex(np.vdot(uj, ui))  # <u_i, u_j> = sum_k u_ik conj(u_jk)
    det = float(abs(ui[0] * uj[1] - ui[1] * uj[0]) ** 2)
    lam1, lam2 = gram_eigs(a, d, abs(b) ** 2, det)
    return PairGram(i, j, a, d, b, lam1, lam2)


def all_pair_lambda2(A: np.ndarray) -> np.ndarray:
    """Symmetric n x n table of lam2 over all row pairs (diagonal is 0)."""
    A = as_array(A)
    nrm = np.sum(A.real**2 + A.imag**2, axis=1)
    tr = nrm[:, None] + nrm[None, :]
    b2 = np.abs(A @ A.conj().T) ** 2
    det = np.abs(np.outer(A[:, 0], A[:, 1]) - np.outer(A[:, 1], A[:, 0])) ** 2
    disc = np.maximum((nrm[:, None] - nrm[None, :]) ** 2 + 4.0 * b2, 0.0)
    lam1 = 0.5 * (tr + np.sqrt(disc))
    with np.errstate(invalid="ignore", divide="ignore"):
        lam2 = np.where(lam1 > 0, det / lam1, 0.0)
    np.fill_diagonal(lam2, 0.0)
    return lam2


def rotate_row_to_axis(U, i: int) -> tuple[OrthoMatrix, float]:
    """Right-multiply by a unitary Z so that row i becomes (v, 0), v = ||u_i|| >= 0."""
    V, v = _rotate(as_array(U), i)
    return OrthoMatrix(V, ortho_deviation(V)), v


def _rotate(A: np.ndarray, i: int) -> tuple[np.ndarray, float]:
    if not 0 <= i < A.shape[0]:
        raise IndexOutOfRange(f"row index {i} outside [0, {A.shape[0]})")
    u1, u2 = A[i]
    v = math.hypot(abs(u1), abs(u2))
    if v == 0.0:
        raise ZeroRow(f"row {i} is zero")
    Z = np.array([[np.conj(u1), -u2], [np.conj(u2), u1]]) / v
    V = A @ Z
    V[i] = (v, 0.0)
    V.setflags(write=False)
    return V, v
