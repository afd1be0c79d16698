import math

import numpy as np
import pytest

from bestinv import (
    ConfigInvalid,
    NonFinite,
    config_from_matrix,
    hopf_lift,
    hopf_map,
    matrix_from_config,
    random_ortho,
    transfer_identity_check,
)
from bestinv.constants import ALPHA
from bestinv.extremal import TETRA, extremal_matrix, tetrahedron_config
from bestinv.oracle import brute_force_best_pair
from oracles import hopf_literal, lambda2_table_svd

S = 1 / math.sqrt(2)


@pytest.mark.parametrize(
    "u, w",
    [
        ((1, 0), (0, 0, 1)),
        ((S, S), (1, 0, 0)),
        ((S, 1j * S), (0, -1, 0)),
    ],
)
def test_hopf_map_examples(u, w):
    assert np.allclose(hopf_map(u), w, atol=1e-15)
    assert np.allclose(hopf_literal(*u), w, atol=1e-15)


def test_hopf_map_matches_literal_formula(rng):
    for _ in range(50):
        u = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        assert np.allclose(hopf_map(u), hopf_literal(*u), rtol=1e-14, atol=1e-15)


def test_hopf_nonfinite():
    with pytest.raises(NonFinite):
        hopf_map((np.inf, 0))
    with pytest.raises(NonFinite):
        hopf_lift((np.nan, 0, 0))


def test_lift_examples():
    u = hopf_lift((0, 0, 0.5))
    assert u[0] == pytest.approx(0.7071067811865476) and u[1] == 0
    assert np.array_equal(hopf_lift((0, 0, -1)), np.array([0, 1], dtype=complex))
    assert np.array_equal(hopf_lift((0, 0, 0)), np.zeros(2, dtype=complex))
    w = TETRA[0] / 2
    assert np.max(np.abs(hopf_map(hopf_lift(w)) - w)) < 1e-14


def test_lift_near_south_pole():
    # a threshold-based south branch loses ~1e-7 here
    for eps in (1e-3, 1e-8, 1e-12, 1e-15, 0.0):
        w = np.array([eps, -eps / 3, -1.0])
        u = hopf_lift(w)
        assert u[0].imag == 0 and u[0].real >= 0
        assert np.max(np.abs(hopf_map(u) - w)) < 1e-15


def test_config_from_identity(identity3):
    cfg = config_from_matrix(identity3)
    assert np.array_equal(cfg.w, [[0, 0, 1], [0, 0, -1], [0, 0, 0]])


def test_config_from_extremal_n4():
    cfg = config_from_matrix(extremal_matrix(4))
    assert np.allclose(cfg.r, 0.5, atol=1e-14)
    G = cfg.w @ cfg.w.T
    off = G[~np.eye(4, dtype=bool)]
    assert np.allclose(off, -1 / 12, atol=1e-14)


def test_config_sums_random():
    U = random_ortho(10, 1)
    cfg = config_from_matrix(U)
    closure, perim = cfg.residuals()
    assert closure < 1e-12 and perim < 1e-12
    assert np.allclose(cfg.r, U.row_norms2(), rtol=1e-14, atol=1e-16)


def test_matrix_from_identity_config(identity3):
    U = matrix_from_config([[0, 0, 1], [0, 0, -1], [0, 0, 0]])
    assert np.array_equal(U.data, identity3)


def test_matrix_from_tetra_config_attains_floor():
    U = matrix_from_config(tetrahedron_config(4))
    assert brute_force_best_pair(U).lambda2_max == pytest.approx(ALPHA / 4, abs=1e-14)


def test_matrix_from_config_invalid():
    with pytest.raises(ConfigInvalid):
        matrix_from_config([[0, 0, 1], [0, 0, -1], [0, 0, 0.1]])


def test_roundtrip_random_12():
    U = random_ortho(12, 5)
    V = matrix_from_config(config_from_matrix(U))
    # rows agree up to a per-row phase
    for u, v in zip(U.data, V.data):
        ph = np.vdot(v, u)
        assert abs(abs(ph) - np.vdot(u, u).real) < 1e-12
        if abs(ph) > 0:
            assert np.allclose(u, v * ph / abs(ph), atol=1e-12)
    assert np.max(np.abs(lambda2_table_svd(U.data) - lambda2_table_svd(V.data))) < 1e-10
    assert np.max(np.abs(config_from_matrix(V).w - config_from_matrix(U).w)) < 1e-10


def test_transfer_identity(identity3):
    assert transfer_identity_check(identity3) == 0.0
    assert transfer_identity_check(random_ortho(20, 9)) < 1e-12


def test_transfer_identity_extremal_cross_value():
    U = extremal_matrix(4)
    b2 = abs(np.vdot(U.data[1], U.data[0])) ** 2
    assert b2 == pytest.approx(1 / 12, abs=1e-14)
    assert b2 == pytest.approx(0.5 * 0.25 + 0.5 * (-1 / 12), abs=1e-14)
