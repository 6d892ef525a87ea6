#!/usr/bin/env python3
"""
Tests for the exact gap of loneliness.
"""

import sys
import os

# Add the project root to the Python path
sys.path.append(os.path.dirname(os.path.abspath(__file__)))

from fractions import Fraction

import numpy as np
import pytest

from models.speed_vector import SpeedVector
from services.exact_service import (
    candidate_denominators,
    candidate_times,
    conjecture_holds,
    dense_grid_gap_lower,
    dist_to_nearest_integer,
    gap,
    in_v_q,
    is_tight,
    mu,
)
from utils.exceptions import SpeedVectorError


def test_distance_to_nearest_integer():
    assert dist_to_nearest_integer(Fraction(7, 3)) == Fraction(1, 3)
    assert dist_to_nearest_integer(Fraction(-1, 4)) == Fraction(1, 4)
    assert dist_to_nearest_integer(Fraction(5, 2)) == Fraction(1, 2)
    assert mu(SpeedVector.of(1, 2, 3), Fraction(1, 4)) == Fraction(1, 4)


@pytest.mark.parametrize("n", range(2, 13))
def test_consecutive_speeds_are_dirichlet_sharp(n):
    v = SpeedVector(tuple(range(1, n)))
    result = gap(v)
    assert result.gap == Fraction(1, n)
    assert result.t_min == Fraction(1, n)
    assert result.q == n
    assert is_tight(v)


def test_known_gaps():
    assert gap(SpeedVector.of(1, 3, 5)).gap == Fraction(1, 2)
    assert gap(SpeedVector.of(1, 2, 3, 5)).gap == Fraction(1, 4)
    assert gap(SpeedVector.of(2, 4, 6)).gap == Fraction(1, 4)
    assert gap(SpeedVector.of(1, 4, 7)).gap == Fraction(3, 8)
    single = gap(SpeedVector.of(3))
    assert single.gap == Fraction(1, 2)
    assert single.t_min == Fraction(1, 6)


@pytest.mark.parametrize("speeds", [(1, 2, 3), (1, 4, 7), (2, 5, 7), (1, 3, 4, 9), (3,)])
def test_gap_is_dilation_invariant(speeds):
    v = SpeedVector(speeds)
    base = gap(v)
    for a in (2, 3, 7):
        assert gap(v.scaled(a)).gap == base.gap


def test_gap_denominator_divides_q():
    for speeds in [(1, 2, 3), (1, 4, 7), (2, 5, 7), (1, 3, 5), (1, 2, 3, 5), (2, 4, 6), (1, 3, 4, 9), (5, 8, 11, 13)]:
        result = gap(SpeedVector(speeds))
        assert result.q % result.b == 0


def test_maximizers_are_symmetric():
    result = gap(SpeedVector.of(1, 2, 3))
    assert result.maximizers == (Fraction(1, 4), Fraction(3, 4))
    for t in result.maximizers:
        assert mu(SpeedVector.of(1, 2, 3), t) == result.gap


def test_all_odd_vectors_have_gap_one_half():
    rng = np.random.default_rng(11)
    odd = np.arange(1, 100, 2)
    for _ in range(50):
        size = int(rng.integers(1, 7))
        speeds = tuple(sorted(int(s) for s in rng.choice(odd, size=size, replace=False)))
        assert gap(SpeedVector(speeds)).gap == Fraction(1, 2)


def test_candidates():
    assert candidate_denominators(SpeedVector.of(1, 2)) == [2, 3, 4]
    times = candidate_times(SpeedVector.of(1, 2))
    assert Fraction(1, 3) in times and Fraction(3, 4) in times
    assert times == sorted(set(times))


def test_dense_grid_never_exceeds_exact_gap():
    rng = np.random.default_rng(3)
    N = 10 ** 6
    for _ in range(100):
        size = int(rng.integers(1, 5))
        speeds = tuple(sorted(int(s) for s in rng.choice(np.arange(1, 31), size=size, replace=False)))
        v = SpeedVector(speeds)
        exact = float(gap(v).gap)
        lower = dense_grid_gap_lower(v, N)
        assert lower <= exact + 1e-15
        assert exact - lower <= v.max_speed / (2 * N) + 1e-12


def test_dense_grid_rejects_tiny_grids():
    with pytest.raises(ValueError):
        dense_grid_gap_lower(SpeedVector.of(1, 2), 1)


def test_orbit_and_v_q_membership():
    v = SpeedVector.of(1, 2, 3)
    result = gap(v)
    assert result.b == 4
    assert result.orbit() == (Fraction(1, 4), Fraction(1, 2), Fraction(3, 4))
    assert in_v_q(v, 4, result)
    assert not in_v_q(v, 3, result)


def test_conjecture_holds_for_small_vectors():
    rng = np.random.default_rng(5)
    for _ in range(40):
        size = int(rng.integers(1, 7))
        speeds = tuple(sorted(int(s) for s in rng.choice(np.arange(1, 41), size=size, replace=False)))
        assert conjecture_holds(SpeedVector(speeds))


def test_overflow_guard():
    with pytest.raises(OverflowError):
        gap(SpeedVector.of(1, 2 ** 31))


@pytest.mark.parametrize("speeds", [(3, 1), (1, 1, 2), (0, 2), (-1, 2), ()])
def test_rejected_speed_vectors(speeds):
    with pytest.raises(SpeedVectorError):
        SpeedVector(speeds)


def test_rejected_non_integer_speed():
    with pytest.raises(SpeedVectorError):
        SpeedVector((1, 2.5))


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
