"""
Linear-programming bounds for the gap of loneliness.

Each bound is the extremal mass-to-peak ratio f^(0)/f(0) over a class of even
trigonometric polynomials. With f(0) normalized to 1 the ratio is the linear
objective c0, the continuum sign condition is sampled, and the numerical
optimum is turned into a rigorous member of the class by zeroing coefficients
with the wrong sign and shifting by a certified constant.
"""
from __future__ import annotations

from typing import List, Optional, Sequence

import numpy as np

from config import (
    BOUND_DEGREE_FACTOR,
    BOUND_EXCHANGE_DENSITY,
    BOUND_EXCHANGE_ROUNDS,
    BOUND_SAMPLE_FACTOR,
    CERT_MIN_NORMALIZATION,
)
from models.bound import BoundResult, BoundSpec, BoundStatus
from models.linear_program import LinearProgram, LpOutcome, LpStatus, Relation
from models.speed_vector import SpeedVector
from models.trig_poly import TrigPoly
from services import lp_solver
from services.trigpoly_service import rigorous_min, shift_const
from utils.exceptions import SolverError
from utils.logger import get_logger

logger = get_logger(__name__)

_EXCHANGE_THRESHOLD = 1e-12
_AUDIT_CUSHION = 1e-12
_AUDIT_PASSES = 3
_CLUSTER_RATIOS = (1 / 4, 1 / 16, 1 / 64, 1 / 256, 1 / 1024, 1 / 4096)
# Minimum distance between sample points, as a fraction of the grid spacing.
_MIN_GAP_RATIO = 2e-4


def default_degree(v: SpeedVector) -> int:
    return BOUND_DEGREE_FACTOR * v.max_speed


def default_samples(degree: int) -> int:
    return BOUND_SAMPLE_FACTOR * degree + 1


def make_spec(
    v: SpeedVector,
    epsilon: int,
    degree: Optional[int] = None,
    samples: Optional[int] = None,
    q: Optional[int] = None,
    certify: bool = True,
) -> BoundSpec:
    degree = default_degree(v) if degree is None else degree
    samples = default_samples(degree) if samples is None else samples
    return BoundSpec(v=v, epsilon=epsilon, degree=degree, samples=samples, q=q, certify=certify)


def sample_points(spec: BoundSpec, extra_points: Sequence[float] = ()) -> np.ndarray:
    """Uniform grid of spec.samples points on the sign region (both endpoints
    included), followed by any extra points that fall inside the region."""
    lo, hi = spec.region
    grid = np.linspace(lo, hi, spec.samples)
    if not len(extra_points):
        return grid
    extra = np.asarray(extra_points, dtype=float)
    extra = extra[(extra >= lo) & (extra <= hi)]
    fresh = [x for x in np.unique(extra) if np.min(np.abs(grid - x)) > 1e-15]
    return np.concatenate([grid, fresh]) if fresh else grid


def build_lp(spec: BoundSpec, extra_points: Sequence[float] = ()) -> LinearProgram:
    """Variables c_0..c_D (free). Rows: f(0) = 1; eps * f(x_j) >= 0 on the
    samples; eps * c_k <= 0 for every k in 1..D outside the speeds.
    Objective: minimize eps * c_0."""
    D = spec.degree
    eps = float(spec.epsilon)
    objective = np.zeros(D + 1)
    objective[0] = eps
    lp = LinearProgram.free(D + 1, objective)

    normalization = np.full(D + 1, 2.0)
    normalization[0] = 1.0
    lp.add(normalization, Relation.EQ, 1.0)

    xs = sample_points(spec, extra_points)
    ks = np.arange(1, D + 1, dtype=float)
    table = np.empty((xs.size, D + 1))
    table[:, 0] = 1.0
    table[:, 1:] = 2.0 * np.cos(2.0 * np.pi * np.outer(xs, ks))
    for row in eps * table:
        lp.add(row, Relation.GE, 0.0)

    allowed = set(spec.allowed_support())
    for k in range(1, D + 1):
        if k in allowed:
            continue
        row = np.zeros(D + 1)
        row[k] = eps
        lp.add(row, Relation.LE, 0.0)

    logger.debug(
        "build_lp v=%s eps=%+d q=%s: %d vars, %d samples, %d coefficient rows",
        spec.v, spec.epsilon, spec.q, D + 1, xs.size, len(lp.constraints) - 1 - xs.size,
    )
    return lp


def _exchange_points(spec: BoundSpec, f: TrigPoly) -> List[float]:
    """New sample points for every dip of eps * f below zero.

    Dips are found on a grid BOUND_EXCHANGE_DENSITY times finer than the
    samples. Each one is bracketed by its sign changes z1 < z2 and gets the
    dip itself plus points pulled geometrically toward both z1 and z2.
    """
    lo, hi = spec.region
    eps = spec.epsilon
    xs = np.linspace(lo, hi, BOUND_EXCHANGE_DENSITY * (spec.samples - 1) + 1)
    vals = eps * f.evaluate(xs)
    left = np.concatenate([[np.inf], vals[:-1]])
    right = np.concatenate([vals[1:], [np.inf]])
    dips = np.flatnonzero((vals <= left) & (vals <= right) & (vals < -_EXCHANGE_THRESHOLD))
    if dips.size > 4 * spec.degree:
        dips = dips[np.argsort(vals[dips])[: 4 * spec.degree]]

    def signed(x: float) -> float:
        return eps * f.evaluate(x)

    points: List[float] = []
    for i in dips:
        j = i
        while j > 0 and vals[j - 1] < 0:
            j -= 1
        z1 = _sign_change(signed, float(xs[j - 1]), float(xs[j])) if j > 0 else lo
        j = i
        while j < xs.size - 1 and vals[j + 1] < 0:
            j += 1
        z2 = _sign_change(signed, float(xs[j + 1]), float(xs[j])) if j < xs.size - 1 else hi
        width = z2 - z1
        points.append(float(xs[i]))
        for r in _CLUSTER_RATIOS:
            points.extend((z1 + r * width, z2 - r * width))
    return points


def _spread(spec: BoundSpec, points: Sequence[float], existing: Sequence[float]) -> List[float]:
    """Drop candidates within _MIN_GAP_RATIO grid spacings of a kept or existing point."""
    lo, hi = spec.region
    min_gap = _MIN_GAP_RATIO * (hi - lo) / (spec.samples - 1)
    taken = np.sort(np.asarray(existing, dtype=float))
    kept: List[float] = []
    for x in sorted(points):
        i = int(np.searchsorted(taken, x))
        if i < taken.size and taken[i] - x < min_gap:
            continue
        if i > 0 and x - taken[i - 1] < min_gap:
            continue
        if kept and x - kept[-1] < min_gap:
            continue
        kept.append(x)
    return kept


def _sign_change(g, outside: float, inside: float, iterations: int = 60) -> float:
    """Bisect between g(outside) >= 0 and g(inside) < 0; returns the outside end."""
    for _ in range(iterations):
        mid = 0.5 * (outside + inside)
        if mid in (outside, inside):
            break
        if g(mid) >= 0:
            outside = mid
        else:
            inside = mid
    return outside


def _failed(spec: BoundSpec, outcome: LpOutcome) -> BoundResult:
    status = BoundStatus.INFEASIBLE if outcome.status is LpStatus.INFEASIBLE else BoundStatus.UNBOUNDED
    logger.info("bound v=%s eps=%+d q=%s D=%d N=%d: LP %s",
                spec.v, spec.epsilon, spec.q, spec.degree, spec.samples, outcome.status.value)
    return BoundResult(spec=spec, status=status)


def certify(
    spec: BoundSpec,
    raw: LpOutcome,
    exchange_rounds: int = 0,
    extra_points: int = 0,
) -> BoundResult:
    """Repair the LP optimum into a rigorous class member.

    1. coefficients outside the allowed support with the wrong sign are zeroed;
       each such e_k moves eps * f pointwise by at most 2 e_k;
    2. m = rigorous min of eps * f over the continuous region;
    3. g = f + eps * defect with defect = max(0, -m) + 2 sum e_k.
    The shifted g is audited once more and nudged if roundoff left it below 0.
    """
    if not raw.is_optimal:
        raise ValueError(f"certify needs an optimal LP outcome, got {raw.status.value}")
    eps = spec.epsilon
    lo, hi = spec.region
    f = TrigPoly(raw.solution)
    lp_value = f.mass

    coeffs = f.coeffs.copy()
    allowed = set(spec.allowed_support())
    wrong_sign = 0.0
    for k in range(1, spec.degree + 1):
        if k in allowed:
            continue
        e = eps * coeffs[k]
        if e > 0:
            wrong_sign += e
            coeffs[k] = 0.0
    coefficient_repair = 2.0 * wrong_sign
    repaired = TrigPoly(coeffs)

    sign_check = rigorous_min(f.scaled(eps), lo, hi)
    defect = max(0.0, -sign_check.bound) + coefficient_repair
    g = shift_const(repaired, eps * defect)

    audit = rigorous_min(g.scaled(eps), lo, hi)
    for _ in range(_AUDIT_PASSES):
        if audit.bound >= 0.0:
            break
        defect += -audit.bound + _AUDIT_CUSHION
        g = shift_const(repaired, eps * defect)
        audit = rigorous_min(g.scaled(eps), lo, hi)

    at_zero = g.value_at_zero()
    status = BoundStatus.CERTIFIED
    certified_value = g.mass / at_zero if at_zero != 0 else float("nan")
    if at_zero <= CERT_MIN_NORMALIZATION:
        logger.warning(
            "bound v=%s eps=%+d: repair defect %.3e leaves g(0)=%.3e, not certifiable",
            spec.v, eps, defect, at_zero,
        )
        status = BoundStatus.SOLVED_UNCERTIFIED
        certified_value = float("nan")
    elif audit.bound < -_AUDIT_CUSHION:
        logger.warning("bound v=%s eps=%+d: audit minimum %.3e stays negative", spec.v, eps, audit.bound)
        status = BoundStatus.SOLVED_UNCERTIFIED
        certified_value = float("nan")

    result = BoundResult(
        spec=spec,
        status=status,
        lp_value=lp_value,
        polynomial=g,
        certified_value=certified_value,
        repair_shift=eps * defect,
        coefficient_repair=coefficient_repair,
        defect=defect,
        audit_min=audit.bound,
        active_degree=g.active_degree(),
        exchange_rounds=exchange_rounds,
        extra_points=extra_points,
    )
    logger.info(
        "bound v=%s eps=%+d q=%s D=%d N=%d: lp=%.10g certified=%.10g defect=%.3e status=%s",
        spec.v, eps, spec.q, spec.degree, spec.samples, lp_value, certified_value, defect, status.value,
    )
    return result


def run_bound(spec: BoundSpec, exchange_rounds: int = BOUND_EXCHANGE_ROUNDS) -> BoundResult:
    """build_lp -> solve -> constraint exchange -> certify."""
    extras: List[float] = []
    outcome = lp_solver.solve(build_lp(spec))
    if not outcome.is_optimal:
        return _failed(spec, outcome)

    rounds = 0
    for _ in range(exchange_rounds):
        new_points = _spread(
            spec,
            _exchange_points(spec, TrigPoly(outcome.solution)),
            np.concatenate([sample_points(spec), extras]),
        )
        if not new_points:
            break
        rounds += 1
        try:
            candidate = lp_solver.solve(build_lp(spec, extras + new_points))
        except SolverError as e:
            logger.warning("exchange round %d for v=%s eps=%+d failed (%s); keeping the previous optimum",
                           rounds, spec.v, spec.epsilon, e)
            break
        if not candidate.is_optimal:
            logger.debug("exchange round %d made the LP %s; keeping the previous optimum",
                         rounds, candidate.status.value)
            break
        extras.extend(new_points)
        outcome = candidate

    if not spec.certify:
        f = TrigPoly(outcome.solution)
        return BoundResult(
            spec=spec,
            status=BoundStatus.SOLVED_UNCERTIFIED,
            lp_value=f.mass,
            polynomial=f,
            certified_value=f.mass,
            active_degree=f.active_degree(),
            exchange_rounds=rounds,
            extra_points=len(extras),
        )
    return certify(spec, outcome, exchange_rounds=rounds, extra_points=len(extras))


def lambda_plus(
    v: SpeedVector,
    degree: Optional[int] = None,
    samples: Optional[int] = None,
    certify: bool = True,
    exchange_rounds: int = BOUND_EXCHANGE_ROUNDS,
) -> BoundResult:
    """Certified upper bound for gap(v)."""
    result = run_bound(make_spec(v, 1, degree, samples, certify=certify), exchange_rounds)
    if result.status is BoundStatus.INFEASIBLE:
        # a nonnegative kernel always fits the upper class
        logger.error("lambda_plus v=%s came back infeasible; solver tolerance problem", v)
    return result


def lambda_minus(
    v: SpeedVector,
    degree: Optional[int] = None,
    samples: Optional[int] = None,
    certify: bool = True,
    exchange_rounds: int = BOUND_EXCHANGE_ROUNDS,
) -> BoundResult:
    """Certified lower bound for gap(v); Infeasible is a legal outcome."""
    result = run_bound(make_spec(v, -1, degree, samples, certify=certify), exchange_rounds)
    if result.solved:
        logger.info("lambda_minus v=%s used active degree %d of %d",
                    v, result.active_degree, result.degree)
    return result


def lambda_minus_q(
    v: SpeedVector,
    q: int,
    degree: Optional[int] = None,
    samples: Optional[int] = None,
    certify: bool = True,
    exchange_rounds: int = BOUND_EXCHANGE_ROUNDS,
) -> BoundResult:
    """Lower bound for gap(v) valid when v is in V_q (recorded on the result)."""
    return run_bound(make_spec(v, -1, degree, samples, q=q, certify=certify), exchange_rounds)
