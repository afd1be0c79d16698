import math

import numpy as np
import pytest

from bestinv import (
    IndexOutOfRange,
    NonFinite,
    NotOrthonormal,
    SameIndex,
    TooFewRows,
    ZeroRow,
    pair_gram,
    random_ortho,
    rotate_row_to_axis,
    validate_ortho,
)
from bestinv.constants import ALPHA
from bestinv.extremal import extremal_matrix
from bestinv.linalg import all_pair_lambda2, orthonormalize
from oracles import lambda2_table_svd, sigma2_svd


def test_identity_embedding_accepted(identity3):
    U = validate_ortho(identity3, tol=1e-10)
    assert U.n == 3
    assert U.deviation == 0.0


def test_duplicate_column_rejected():
    with pytest.raises(NotOrthonormal) as exc:
        validate_ortho([[1, 0], [0, 1], [0, 1]])
    # col2 has norm^2 2
    assert exc.value.deviation == pytest.approx(1.0)


def test_too_few_rows_and_nonfinite():
    with pytest.raises(TooFewRows):
        validate_ortho([[1, 0], [0, 1]])
    with pytest.raises(NonFinite):
        validate_ortho([[np.nan, 0], [0, 1], [0, 0]])


def test_gaussian_orthonormalized_8x2():
    rng = np.random.default_rng(3)
    G = rng.standard_normal((8, 2)) + 1j * rng.standard_normal((8, 2))
    Q = orthonormalize(G)
    dev = np.max(np.abs(Q.conj().T @ Q - np.eye(2)))
    assert dev < 1e-12
    assert validate_ortho(Q).deviation < 1e-12


def test_random_ortho_deterministic():
    a = random_ortho(5, 42).data
    b = random_ortho(5, 42).data
    c = random_ortho(5, 43).data
    assert np.array_equal(a, b)
    assert not np.allclose(a, c)


def test_random_ortho_large():
    U = random_ortho(100, 7)
    validate_ortho(U.data, tol=1e-10)
    assert U.row_norms2().sum() == pytest.approx(2.0, abs=1e-10)


def test_pair_gram_identity_rows(identity3):
    g = pair_gram(identity3, 0, 1)
    assert g.lam1 == 1.0 and g.lam2 == 1.0
    assert g.inv_norm == 1.0


def test_pair_gram_extremal_cross_pair():
    U = extremal_matrix(4)
    g = pair_gram(U, 0, 1)
    assert g.lam1 == pytest.approx(0.5 + 1 / (2 * math.sqrt(3)), abs=1e-12)
    assert g.lam2 == pytest.approx(ALPHA / 4, abs=1e-12)
    assert g.lam2 == pytest.approx(0.21132486540518708, abs=1e-12)


def test_pair_gram_collinear_rows():
    u = np.array([0.3 + 0.1j, -0.2 + 0.4j])
    A = np.array([u, (0.7 - 0.2j) * u, [0.5, 0.5]])
    assert 0.0 <= pair_gram(A, 0, 1).lam2 < 1e-14


def test_pair_gram_errors(identity3):
    with pytest.raises(SameIndex):
        pair_gram(identity3, 1, 1)
    with pytest.raises(IndexOutOfRange):
        pair_gram(identity3, 0, 3)


def test_pair_gram_matches_svd_and_identities():
    U = random_ortho(15, 2)
    for i in range(15):
        for j in range(i + 1, 15):
            g = pair_gram(U, i, j)
            s2 = sigma2_svd(U.data, i, j)
            assert g.sigma2 == pytest.approx(s2, rel=1e-12, abs=1e-15)
            tr = g.a + g.d
            assert g.lam1 + g.lam2 == pytest.approx(tr, rel=1e-12)
            assert g.lam1 * g.lam2 == pytest.approx(g.a * g.d - abs(g.b) ** 2, rel=1e-10, abs=1e-15)
            assert g.lam2 >= 0


def test_all_pair_table_matches_svd():
    U = random_ortho(9, 4)
    assert np.allclose(all_pair_lambda2(U), lambda2_table_svd(U.data), rtol=1e-11, atol=1e-15)


def test_rotate_axis_cases():
    A = np.array([[0.6, 0], [0, 0.8], [0.8, 0], [0, 0.6]], dtype=complex)
    A = A / np.linalg.norm(A, axis=0)
    V, v = rotate_row_to_axis(A, 0)
    assert v == pytest.approx(np.abs(A[0, 0]))
    assert np.allclose(V.data, A)

    B = np.array([[0, 0.8j], [1, 0], [0, 0.6]], dtype=complex)
    V, v = rotate_row_to_axis(B, 0)
    assert v == pytest.approx(0.8)
    assert V.data[0, 0] == pytest.approx(0.8) and V.data[0, 1] == 0


def test_rotate_zero_row(identity3):
    with pytest.raises(ZeroRow):
        rotate_row_to_axis(identity3, 2)


@pytest.mark.parametrize("seed", range(5))
def test_rotate_preserves_all_sigma2(seed):
    U = random_ortho(12, seed)
    i = seed % 12
    V, v = rotate_row_to_axis(U, i)
    assert V.data[i, 1] == 0 and V.data[i, 0].imag == 0 and V.data[i, 0].real >= 0
    assert V.deviation < 1e-12
    assert np.max(np.abs(lambda2_table_svd(U.data) - lambda2_table_svd(V.data))) < 1e-12
