import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import naive_fronts, union_area
from sewer_osp.pareto import (
    NormalizationBounds,
    crowding_distance,
    dominates,
    hypervolume_2d,
    non_dominated_sort,
    normalize_points,
)

unit = st.floats(0.0, 1.0, allow_nan=False)
objective = st.tuples(st.integers(0, 30), st.sampled_from([0.0, 0.5, 1.0, 1.25, 2.0, 3.5]))


def test_dominates():
    assert dominates((4, 1.19), (4, 2.0))
    assert not dominates((2, 0), (4, 1.19))
    assert not dominates((4, 1.19), (2, 0))
    assert not dominates((3, 1.0), (3, 1.0))


def test_sort_examples():
    fa = non_dominated_sort([(4, 2), (4, 1.19), (2, 0)])
    assert fa.fronts == [[1, 2], [0]]
    assert fa.rank.tolist() == [1, 0, 0]
    assert non_dominated_sort([(3, 1.0)] * 4).fronts == [[0, 1, 2, 3]]
    # coverage up, cost down: trade-off chain
    assert non_dominated_sort([(1, 1), (2, 2), (3, 3)]).fronts == [[0, 1, 2]]
    assert non_dominated_sort([]).fronts == []


@settings(max_examples=200, deadline=None)
@given(st.lists(objective, max_size=60))
def test_sort_matches_naive(points):
    assert non_dominated_sort(points).fronts == naive_fronts(points)


def test_crowding_examples():
    assert crowding_distance([(1, 3), (2, 2)]).tolist() == [np.inf, np.inf]
    assert crowding_distance([(5, 1)]).tolist() == [np.inf]
    d = crowding_distance([(1, 3), (2, 2), (3, 1)])
    assert d[0] == np.inf and d[2] == np.inf
    assert d[1] == pytest.approx(2.0, abs=1e-12)


def test_crowding_standard_formula():
    pts = [(0, 10.0), (1, 6.0), (4, 4.0), (10, 0.0)]
    d = crowding_distance(pts)
    assert d[1] == pytest.approx((4 - 0) / 10 + (10 - 4) / 10)
    assert d[2] == pytest.approx((10 - 1) / 10 + (6 - 0) / 10)


@settings(max_examples=100, deadline=None)
@given(st.lists(objective, min_size=1, max_size=25), st.randoms(use_true_random=False))
def test_crowding_permutation_equivariant(points, rnd):
    perm = list(range(len(points)))
    rnd.shuffle(perm)
    d = crowding_distance(points)
    dp = crowding_distance([points[i] for i in perm])
    np.testing.assert_array_equal(dp, d[perm])


def test_normalize_corners():
    b = NormalizationBounds(0, 4, 0, 2)
    np.testing.assert_allclose(normalize_points([(4, 0), (0, 2), (2, 1)], b), [[0, 0], [1, 1], [0.5, 0.5]])


def test_normalize_degenerate_and_clamp():
    b = NormalizationBounds(3, 3, 1, 1)
    np.testing.assert_array_equal(normalize_points([(3, 1)], b), [[0, 0]])
    with warnings.catch_warnings(record=True) as w:
        warnings.simplefilter("always")
        out = normalize_points([(5, -1)], NormalizationBounds(0, 4, 0, 2))
    assert w and out.tolist() == [[0.0, 0.0]]


def test_hypervolume_examples():
    assert hypervolume_2d([(0, 0)]) == pytest.approx(1.0, abs=1e-12)
    assert hypervolume_2d([(0.25, 0.25), (0.5, 0.5)]) == pytest.approx(0.5625, abs=1e-12)
    assert hypervolume_2d([(0.2, 0.6), (0.6, 0.2)]) == pytest.approx(0.48, abs=1e-12)
    assert hypervolume_2d([(1, 1)]) == 0.0
    assert hypervolume_2d([]) == 0.0


@settings(max_examples=200, deadline=None)
@given(st.lists(st.tuples(unit, unit), max_size=30))
def test_hypervolume_matches_union_area(points):
    assert hypervolume_2d(points) == pytest.approx(union_area(points), abs=1e-12)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.tuples(unit, unit), max_size=30), st.tuples(unit, unit))
def test_hypervolume_monotone(points, extra):
    base = hypervolume_2d(points)
    assert 0.0 <= base <= 1.0
    assert hypervolume_2d(points + [extra]) >= base - 1e-15
    dominated = (min(1.0, extra[0] + 0.1), min(1.0, extra[1] + 0.1))
    with_extra = hypervolume_2d(points + [extra])
    assert hypervolume_2d(points + [extra, dominated]) == pytest.approx(with_extra, abs=1e-15)
