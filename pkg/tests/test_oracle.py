import math

import numpy as np
import pytest

from bestinv import ALPHA, brute_force_best_pair, compare_with_certified, random_ortho
from bestinv.extremal import extremal_matrix
from bestinv.linalg import all_pair_lambda2
from oracles import brute_best_pair, lambda2_table_svd


def test_identity_embedding(identity3):
    res = brute_force_best_pair(identity3)
    assert res.best_pair == (0, 1)
    assert res.lambda2_max == 1.0


def test_extremal_n4():
    res = brute_force_best_pair(extremal_matrix(4))
    assert res.lambda2_max == pytest.approx(0.21132486540518708, abs=1e-12)
    assert res.best_pair == (0, 1)
    assert res.inv_norm_min == pytest.approx(math.sqrt(3 + math.sqrt(3)), abs=1e-10)


def test_extremal_n8_table():
    res = brute_force_best_pair(extremal_matrix(8), keep_table=True)
    T = res.table
    for i in range(8):
        for j in range(i + 1, 8):
            if i // 2 == j // 2:
                assert T[i, j] < 1e-14
            else:
                assert T[i, j] == pytest.approx(ALPHA / 8, abs=1e-12)
    rows = list(res.table_rows())
    assert len(rows) == 28 and rows[0][:2] == (0, 1)


@pytest.mark.parametrize("seed", range(6))
def test_matches_svd_bruteforce(seed):
    U = random_ortho(11, seed)
    i, j, m = brute_best_pair(U.data)
    res = brute_force_best_pair(U)
    assert res.best_pair == (i, j)
    assert res.lambda2_max == pytest.approx(m, rel=1e-12)


def test_blocked_and_threaded_agree():
    U = random_ortho(300, 3)
    ref = brute_force_best_pair(U)
    for block, threads in [(7, 1), (64, 4), (1000, 1)]:
        res = brute_force_best_pair(U, block=block, threads=threads)
        assert res.best_pair == ref.best_pair
        assert res.lambda2_max == ref.lambda2_max
    tab = brute_force_best_pair(U, keep_table=True)
    assert tab.best_pair == ref.best_pair


def test_row_permutation_symmetry():
    U = random_ortho(25, 8)
    perm = np.random.default_rng(1).permutation(25)
    a = brute_force_best_pair(U)
    b = brute_force_best_pair(U.data[perm])
    assert a.lambda2_max == pytest.approx(b.lambda2_max, rel=1e-14)
    inv = np.argsort(perm)
    assert tuple(sorted(perm[list(b.best_pair)])) == a.best_pair or \
        all_pair_lambda2(U)[tuple(perm[list(b.best_pair)])] == pytest.approx(a.lambda2_max, rel=1e-12)
    assert inv.shape == (25,)


def test_compare_with_certified():
    assert compare_with_certified(extremal_matrix(4)).ratio == pytest.approx(1.0, abs=1e-12)
    A = np.zeros((4, 2), dtype=complex)
    A[0, 0] = A[1, 1] = 1
    assert compare_with_certified(A).ratio == 1.0
    for seed in range(100):
        rep = compare_with_certified(random_ortho(30, seed))
        assert rep.ratio <= 1 + 1e-12
        assert rep.oracle_lambda2 >= ALPHA / 30 - 1e-12


def test_table_matches_svd():
    U = random_ortho(6, 0)
    assert np.allclose(brute_force_best_pair(U, keep_table=True).table, lambda2_table_svd(U.data), atol=1e-14)
