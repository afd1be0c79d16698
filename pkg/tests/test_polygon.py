import math

import numpy as np
import pytest

from bestinv import ALPHA, Polygon, PolygonInvalid, check_corollary, gap, gap_consistency, random_ortho
from bestinv.extremal import extremal_matrix, tetrahedron_config
from bestinv.polygon import gap_table
from oracles import centered_config


def naive_gap(a, b):
    return np.linalg.norm(a) + np.linalg.norm(b) - np.linalg.norm(np.add(a, b))


def test_parallel_and_antiparallel():
    assert gap((0, 0, 0.3), (0, 0, 0.7)) == 0.0
    assert gap((0, 0, 0.5), (0, 0, -0.5)) == 1.0


def test_tetrahedron_edges():
    w = tetrahedron_config(4).w
    assert gap(w[0], w[1]) == pytest.approx(1 - 1 / math.sqrt(3), abs=1e-15)
    assert gap(w[0], w[1]) == pytest.approx(2 * ALPHA / 4, abs=1e-15)


def test_gap_identical_and_zero():
    w = np.array([0.1, -0.3, 0.7])
    assert gap(w, w) == 0.0
    assert gap(w, np.zeros(3)) == 0.0


def test_gap_matches_naive_when_well_conditioned(rng):
    for _ in range(100):
        a, b = rng.standard_normal(3), rng.standard_normal(3)
        assert gap(a, b) == pytest.approx(naive_gap(a, b), rel=1e-10, abs=1e-14)


def test_gap_nearly_parallel_accuracy():
    # gap ~ r theta^2 / 4 type quantities where the naive form returns 0 or noise
    a = np.array([1.0, 0.0, 0.0])
    b = np.array([1.0, 1e-9, 0.0])
    # exact: 1 + sqrt(1+1e-18) - sqrt(4 + 1e-18) ~ 1e-18/4
    assert gap(a, b) == pytest.approx(0.25e-18, rel=1e-6)


def test_gap_table_matches_scalar(rng):
    w = centered_config(rng, 9)
    T = gap_table(w)
    for i in range(9):
        for j in range(9):
            assert T[i, j] == pytest.approx(gap(w[i], w[j]), rel=1e-13, abs=1e-16)


def test_corollary_tetrahedron():
    rep = check_corollary(Polygon.from_edges(tetrahedron_config(4).w))
    assert rep.max_gap == pytest.approx(2 * ALPHA / 4, abs=1e-12)
    assert rep.verdict.equality


def test_corollary_random_n10(rng):
    for _ in range(50):
        rep = check_corollary(Polygon.from_edges(centered_config(rng, 10)))
        assert rep.max_gap >= 2 * ALPHA / 10 - 1e-10
        assert not rep.verdict.equality


@pytest.mark.parametrize("k", [2, 3, 4, 6, 10])
def test_planar_regular_polygons_strict(k):
    n = 2 * k
    ang = 2 * np.pi * np.arange(n) / n
    V = np.stack([np.cos(ang), np.sin(ang), np.zeros(n)], axis=1)
    poly = Polygon.from_vertices(V, normalize=True)
    rep = check_corollary(poly)
    assert rep.max_gap > 2 * ALPHA / n
    assert not rep.verdict.equality


def test_vertices_and_validation():
    V = np.array([[0, 0, 0], [1, 0, 0], [0, 1, 0]], dtype=float)
    poly = Polygon.from_vertices(V, normalize=True)
    assert np.linalg.norm(poly.edges, axis=1).sum() == pytest.approx(2.0)
    with pytest.raises(PolygonInvalid):
        Polygon.from_vertices(V)  # perimeter 2 + sqrt 2
    with pytest.raises(PolygonInvalid):
        Polygon.from_edges([[1, 0, 0], [0, 1, 0], [0, 0, 1]], normalize=True)  # not closed


def test_permutation_invariance(rng):
    w = centered_config(rng, 12)
    a = check_corollary(Polygon.from_edges(w))
    b = check_corollary(Polygon.from_edges(w[rng.permutation(12)]))
    assert a.max_gap == pytest.approx(b.max_gap, rel=1e-15)


def test_gap_consistency(identity3):
    assert gap_consistency(identity3) == 0.0
    assert gap_consistency(random_ortho(20, 0)) < 1e-12
    assert gap_consistency(extremal_matrix(4)) < 1e-14
