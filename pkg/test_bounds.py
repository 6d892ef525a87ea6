#!/usr/bin/env python3
"""
Tests for the linear-programming bounds and their certification.
"""

import sys
import os

# Add the project root to the Python path
sys.path.append(os.path.dirname(os.path.abspath(__file__)))

import numpy as np
import pytest

from models.bound import BoundKind, BoundSpec, BoundStatus
from models.linear_program import LpOutcome, LpStatus, Relation
from models.speed_vector import SpeedVector
from models.trig_poly import TrigPoly
from services import lp_solver
from services.bounds_service import (
    build_lp,
    certify,
    default_degree,
    default_samples,
    lambda_minus,
    lambda_minus_q,
    lambda_plus,
    make_spec,
    run_bound,
    sample_points,
)
from services.exact_service import gap
from services.trigpoly_service import fejer, rigorous_min
from utils.exceptions import BoundSpecError


def _audit(result):
    """Independent admissibility check of a certified polynomial."""
    spec = result.spec
    g = result.polynomial
    for k in range(1, g.degree + 1):
        if k not in spec.v:
            assert spec.epsilon * g.coeff(k) <= 0.0
    lo, hi = spec.region
    assert rigorous_min(g.scaled(spec.epsilon), lo, hi).bound >= -1e-12


def test_constraint_counts():
    lp = build_lp(make_spec(SpeedVector.of(1, 2), 1, degree=2, samples=3))
    assert lp.num_vars == 3
    assert lp.count(Relation.EQ) == 1
    assert lp.count(Relation.GE) == 3
    assert lp.count(Relation.LE) == 0

    lp = build_lp(make_spec(SpeedVector.of(1, 3), 1, degree=3, samples=5))
    coefficient_rows = [c for c in lp.constraints if c.relation is Relation.LE]
    assert len(coefficient_rows) == 1
    assert np.allclose(coefficient_rows[0].coefficients, [0, 0, 1, 0])


def test_sign_regions():
    assert make_spec(SpeedVector.of(1, 2, 3), -1, degree=3, q=4).region == (0.25, 0.5)
    assert make_spec(SpeedVector.of(1, 2, 3), -1, degree=3).region == (0.2, 0.5)
    assert make_spec(SpeedVector.of(1, 2, 3), 1, degree=3).region == (0.0, 0.5)
    spec = make_spec(SpeedVector.of(1, 2, 3), -1, degree=3, samples=9, q=4)
    assert spec.kind is BoundKind.LOWER_Q
    xs = sample_points(spec, extra_points=[0.3, 0.1, 0.25])
    assert xs.size == 10
    assert xs[0] == 0.25 and xs[8] == 0.5


def test_spec_invariants():
    v = SpeedVector.of(1, 2, 3)
    with pytest.raises(BoundSpecError):
        BoundSpec(v=v, epsilon=1, degree=2, samples=10)
    with pytest.raises(BoundSpecError):
        BoundSpec(v=v, epsilon=1, degree=3, samples=10, q=4)
    with pytest.raises(BoundSpecError):
        BoundSpec(v=v, epsilon=-1, degree=3, samples=10, q=2)
    with pytest.raises(BoundSpecError):
        BoundSpec(v=SpeedVector.of(3), epsilon=-1, degree=3, samples=10)
    with pytest.raises(BoundSpecError):
        BoundSpec(v=v, epsilon=0, degree=3, samples=10)
    assert default_degree(v) == 6
    assert default_samples(6) == 49


def test_certify_exact_fejer_solution():
    spec = make_spec(SpeedVector.of(1, 2, 3), 1, degree=3, samples=25)
    raw = LpOutcome(LpStatus.OPTIMAL, solution=fejer(4).coeffs / 4.0, objective_value=0.25)
    result = certify(spec, raw)
    assert result.status is BoundStatus.CERTIFIED
    assert result.defect < 1e-8
    assert result.coefficient_repair == 0.0
    assert abs(result.certified_value - 0.25) < 1e-8
    assert abs(result.lp_value - 0.25) < 1e-15
    _audit(result)


def test_certify_shifts_a_negative_dip():
    spec = make_spec(SpeedVector.of(1, 2, 3), 1, degree=3, samples=25)
    f = fejer(4).coeffs / 4.0 * (1 + 1e-7)
    f[0] -= 1e-7
    result = certify(spec, LpOutcome(LpStatus.OPTIMAL, solution=f))
    c0 = f[0]
    d = result.defect
    assert 1e-7 <= d < 1e-7 + 1e-8
    assert abs(result.certified_value - (c0 + d) / (1 + d)) < 1e-13
    assert result.certified_value >= 0.25
    _audit(result)


def test_certify_charges_wrong_sign_coefficients():
    spec = make_spec(SpeedVector.of(1, 3), 1, degree=3, samples=25)
    f = np.array([0.5, 0.0, 0.01, 0.24])
    result = certify(spec, LpOutcome(LpStatus.OPTIMAL, solution=f))
    assert abs(result.coefficient_repair - 0.02) < 1e-15
    assert result.polynomial.coeff(2) == 0.0
    assert result.defect >= 0.02
    _audit(result)


def test_certify_gives_up_when_normalization_collapses():
    spec = make_spec(SpeedVector.of(1, 2, 3), -1, degree=3, samples=9, q=4)
    raw = LpOutcome(LpStatus.OPTIMAL, solution=np.array([1.0, 0.0, 0.0, 0.0]))
    result = certify(spec, raw)
    assert result.status is BoundStatus.SOLVED_UNCERTIFIED
    assert np.isnan(result.certified_value)
    assert result.defect >= 1.0


def test_certify_requires_an_optimum():
    spec = make_spec(SpeedVector.of(1, 2, 3), 1, degree=3, samples=25)
    with pytest.raises(ValueError):
        certify(spec, LpOutcome(LpStatus.INFEASIBLE))


@pytest.mark.parametrize("n", range(3, 9))
def test_lambda_plus_is_sharp_for_consecutive_speeds(n):
    v = SpeedVector(tuple(range(1, n)))
    result = lambda_plus(v, degree=n - 1, samples=32 * n + 1)
    assert result.is_certified
    assert abs(result.certified_value - 1.0 / n) < 1e-6
    assert result.certified_value >= 1.0 / n - 1e-12
    _audit(result)


@pytest.mark.parametrize("speeds,degree,expected", [
    ((1, 3, 5), 5, 0.5),
    ((1, 2, 3, 5), 5, 0.25),
    ((2, 4, 6), 6, 0.25),
    ((2, 6, 10), 10, 0.5),
])
def test_lambda_plus_equality_cases(speeds, degree, expected):
    v = SpeedVector(speeds)
    assert float(gap(v).gap) == expected
    result = lambda_plus(v, degree=degree)
    assert result.is_certified
    assert abs(result.certified_value - expected) < 1e-6


def test_lambda_plus_strict_case():
    v = SpeedVector.of(1, 4, 7)
    result = lambda_plus(v, degree=16)
    assert result.is_certified
    assert 0.375 <= result.certified_value < 0.5


@pytest.mark.parametrize("q", [4, 5, 6, 7])
def test_lambda_minus_q_is_sharp_for_consecutive_speeds(q):
    v = SpeedVector(tuple(range(1, q)))
    result = lambda_minus_q(v, q, degree=q - 1, samples=32 * (q - 2) + 1)
    assert result.assumes_v_q
    assert result.is_certified
    assert abs(result.certified_value - 1.0 / q) < 1e-6
    assert result.certified_value <= 1.0 / q + 1e-12
    _audit(result)


def test_lambda_minus_q_tight_family():
    v = SpeedVector.of(1, 2, 3, 4, 5, 7, 12)
    result = lambda_minus_q(v, 8, degree=12)
    if result.status is BoundStatus.INFEASIBLE:
        pytest.skip("degree 12 admits no polynomial for the restricted class at this sampling")
    assert result.is_certified
    assert result.certified_value <= 0.125 + 1e-12
    _audit(result)


@pytest.mark.parametrize("speeds", [(1, 2, 3), (1, 3), (2, 5, 7)])
def test_sandwich(speeds):
    v = SpeedVector(speeds)
    exact = float(gap(v).gap)
    upper = lambda_plus(v)
    assert upper.is_certified
    assert exact <= upper.certified_value + 1e-12
    lower = lambda_minus(v, degree=8 * v.max_speed)
    assert lower.status in (BoundStatus.CERTIFIED, BoundStatus.SOLVED_UNCERTIFIED, BoundStatus.INFEASIBLE)
    if lower.is_certified:
        assert lower.certified_value <= exact + 1e-12
        _audit(lower)


def test_lambda_plus_default_parameters():
    # exchange rounds run on top of the default grid
    v = SpeedVector.of(1, 2, 3)
    result = lambda_plus(v)
    assert result.is_certified
    assert 0.25 <= result.certified_value < 0.25 + 1e-4
    _audit(result)


def test_lambda_minus_default_parameters_report_a_status():
    v = SpeedVector.of(2, 5, 7)
    result = lambda_minus(v)
    assert result.status in (BoundStatus.CERTIFIED, BoundStatus.SOLVED_UNCERTIFIED, BoundStatus.INFEASIBLE)
    if result.is_certified:
        assert result.certified_value <= float(gap(v).gap) + 1e-12
        _audit(result)


def test_lower_bound_class_monotonicity():
    v = SpeedVector.of(1, 2, 3)
    q = gap(v).q
    plain = lambda_minus(v, degree=12)
    restricted = lambda_minus_q(v, q, degree=12)
    if not (plain.solved and restricted.solved):
        pytest.skip(f"lower programs at degree 12: {plain.status.value}, {restricted.status.value}")
    assert restricted.lp_value >= plain.lp_value - 1e-6


def test_lambda_minus_tiny_program_reports_status():
    result = lambda_minus(SpeedVector.of(1, 2), degree=2, samples=4)
    assert result.status in (
        BoundStatus.INFEASIBLE, BoundStatus.UNBOUNDED,
        BoundStatus.CERTIFIED, BoundStatus.SOLVED_UNCERTIFIED,
    )
    if not result.solved:
        assert result.polynomial is None


def test_nested_sampling_never_lowers_the_upper_lp():
    v = SpeedVector.of(1, 3, 4)
    coarse = run_bound(make_spec(v, 1, degree=8, samples=17, certify=False), exchange_rounds=0)
    fine = run_bound(make_spec(v, 1, degree=8, samples=33, certify=False), exchange_rounds=0)
    assert fine.lp_value >= coarse.lp_value - 1e-9


def test_higher_degree_never_raises_the_upper_lp():
    v = SpeedVector.of(1, 3, 4)
    low = lp_solver.solve(build_lp(make_spec(v, 1, degree=4, samples=65)))
    high = lp_solver.solve(build_lp(make_spec(v, 1, degree=8, samples=65)))
    assert high.objective_value <= low.objective_value + 1e-9


def test_uncertified_run_keeps_the_raw_optimum():
    v = SpeedVector.of(1, 2, 3)
    result = lambda_plus(v, degree=3, samples=25, certify=False)
    assert result.status is BoundStatus.SOLVED_UNCERTIFIED
    assert result.certified_value == result.lp_value
    assert isinstance(result.polynomial, TrigPoly)
    assert abs(result.polynomial.value_at_zero() - 1.0) < 1e-8


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
