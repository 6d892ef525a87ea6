"""
Closed-form equality cases of the bounds, their optimal polynomials, and the
checks that tie an optimal polynomial to the exact gap.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from math import gcd
from typing import Iterator, Optional, Tuple

import numpy as np

from models.equality_case import (
    ChainValues,
    EqualityCase,
    EqualityKind,
    EqualityProbeReport,
    SlacknessReport,
)
from models.gap_result import GapResult
from models.speed_vector import SpeedVector
from models.trig_poly import TrigPoly
from services import bounds_service, exact_service
from services.trigpoly_service import cos_sq, dilate, fejer, hat, quotient_kernel
from utils.logger import get_logger

logger = get_logger(__name__)

PROBE_TOLERANCE = 1e-5


def _contains_progression(v: SpeedVector, a: int, m: int) -> bool:
    """a{1,...,m-1} is a subset of v and every other speed is not divisible by m."""
    progression = {a * j for j in range(1, m)}
    if not progression.issubset(v.speeds):
        return False
    return all(s % m for s in v.speeds if s not in progression)


def _reduce_by_content(v: SpeedVector, inner_detect, *args) -> Optional[EqualityCase]:
    g = v.content
    if g == 1:
        return None
    inner = inner_detect(v.divided(g), *args)
    if not inner.matched:
        return EqualityCase.none()
    polynomial = dilate(inner.polynomial, g) if inner.polynomial is not None else None
    return EqualityCase(
        EqualityKind.GCD_REDUCE,
        predicted_gap=inner.predicted_gap,
        polynomial=polynomial,
        a=g,
        inner=inner,
    )


def detect_upper_equality(v: SpeedVector) -> EqualityCase:
    """Closed-form case where the upper bound equals gap(v).

    Common factors are divided out first, then the all-odd rule is tried,
    then pairs of coprime (a, m) ordered by m and then a.
    """
    reduced = _reduce_by_content(v, detect_upper_equality)
    if reduced is not None:
        return reduced

    if all(s % 2 for s in v.speeds):
        return EqualityCase(
            EqualityKind.ALL_ODD,
            predicted_gap=Fraction(1, 2),
            polynomial=cos_sq(v.speeds[0]),
        )

    top = v.max_speed
    for m in range(2, top + 2):
        for a in range(1, top // (m - 1) + 1):
            if gcd(a, m) != 1:
                continue
            if _contains_progression(v, a, m):
                return EqualityCase(
                    EqualityKind.FEJER_DILATE,
                    predicted_gap=Fraction(1, m),
                    polynomial=dilate(fejer(m), a),
                    a=a,
                    m=m,
                )
    return EqualityCase.none()


def detect_lower_q_equality(v: SpeedVector, q: int) -> EqualityCase:
    """Closed-form case where the q-restricted lower bound equals gap(v) = 1/q."""
    if q < 3:
        return EqualityCase.none()
    reduced = _reduce_by_content(v, detect_lower_q_equality, q)
    if reduced is not None:
        return reduced

    for a in range(1, v.max_speed // (q - 1) + 1):
        if gcd(a, q) != 1:
            continue
        if _contains_progression(v, a, q):
            return EqualityCase(
                EqualityKind.QUOTIENT_KERNEL,
                predicted_gap=Fraction(1, q),
                polynomial=quotient_kernel(a, q),
                a=a,
                m=q,
            )
    return EqualityCase.none()


def slackness_check(
    f: TrigPoly,
    v: SpeedVector,
    result: Optional[GapResult] = None,
    tolerance: float = 1e-8,
) -> SlacknessReport:
    """Measure the two complementary-slackness conditions for f against gap(v).

    (a) f^(k) = 0 for 1 <= k <= D outside the speeds (k = 0 is the mass and is exempt);
    (b) f vanishes on the orbit k * p/q, k in 1..q-1 not divisible by b, gap = a/b.
    """
    result = result or exact_service.gap(v)
    outside = [k for k in range(1, f.degree + 1) if k not in v]
    support_defect = max((abs(f.coeff(k)) for k in outside), default=0.0)

    orbit = result.orbit()
    if orbit:
        xs = np.array([float(x) for x in orbit])
        orbit_defect = float(np.max(np.abs(f.evaluate(xs))))
    else:
        orbit_defect = 0.0

    return SlacknessReport(
        support_defect=support_defect,
        orbit_defect=orbit_defect,
        t=result.t_min,
        gap=result.gap,
        tolerance=tolerance,
    )


def hat_inequality_chain(
    f: TrigPoly,
    v: SpeedVector,
    result: Optional[GapResult] = None,
) -> ChainValues:
    """delta f^(0) >= sum_k f^(k) h(t k) >= delta^2 f(0) with delta = gap(v), t = t_min.

    h is the periodized hat (delta - ||x||)_+. The first step drops the
    coefficients outside the speeds (they are <= 0 for the upper class); the
    second is Parseval against the nonnegative f.
    """
    result = result or exact_service.gap(v)
    delta = float(result.gap)
    t = result.t_min
    lhs = delta * f.mass
    ks = range(1, f.degree + 1)
    points = np.array([float((t * k) % 1) for k in ks]) if f.degree else np.zeros(0)
    mid = delta * f.mass
    if points.size:
        mid += 2.0 * float(np.dot(f.coeffs[1:], hat(delta, points)))
    rhs = delta * delta * f.value_at_zero()
    return ChainValues(lhs=lhs, mid=mid, rhs=rhs)


def tight_family(n: int, variant: str = "A") -> SpeedVector:
    """Speed vectors with gap exactly 1/n attained at a time with denominator n.

    A: (1, ..., n-3, n-1, 2n-4) for n = 2 mod 6, n >= 8.
    B: (1, ..., n-4, n-2, n-1, 2n-6) for n = 3 mod 30, n >= 33.
    """
    variant = variant.upper()
    if variant == "A":
        if n < 8 or n % 6 != 2:
            raise ValueError(f"variant A needs n = 2 (mod 6) and n >= 8, got n={n}")
        return SpeedVector(tuple(range(1, n - 2)) + (n - 1, 2 * n - 4))
    if variant == "B":
        if n < 33 or n % 30 != 3:
            raise ValueError(f"variant B needs n = 3 (mod 30) and n >= 33, got n={n}")
        return SpeedVector(tuple(range(1, n - 3)) + (n - 2, n - 1, 2 * n - 6))
    raise ValueError(f"unknown variant '{variant}', expected 'A' or 'B'")


def all_vectors(max_speed: int, max_len: int) -> Iterator[SpeedVector]:
    for length in range(1, max_len + 1):
        for speeds in combinations(range(1, max_speed + 1), length):
            yield SpeedVector(speeds)


def probe_equality_cases(
    max_speed: int,
    max_len: int,
    tolerance: float = PROBE_TOLERANCE,
    degree: Optional[int] = None,
    samples: Optional[int] = None,
) -> EqualityProbeReport:
    """Compare the detector with the certified upper bound on every small vector.

    Mismatches are collected in the report, never raised.
    """
    if max_speed < 1 or max_len < 1:
        raise ValueError(f"max_speed and max_len must be positive, got {max_speed}, {max_len}")
    report = EqualityProbeReport(max_speed=max_speed, max_len=max_len)
    for v in all_vectors(max_speed, max_len):
        report.checked += 1
        exact = exact_service.gap(v)
        case = detect_upper_equality(v)
        if case.matched:
            report.flagged += 1
        bound = bounds_service.lambda_plus(v, degree=degree, samples=samples)
        if not bound.is_certified:
            report.uncertified.append(v)
            continue
        tight = abs(bound.certified_value - float(exact.gap)) < tolerance
        if tight:
            report.tight += 1
            if not case.matched:
                report.exceptions.append(v)
        elif case.matched:
            report.unconfirmed.append(v)

    logger.info(
        "equality probe max_speed=%d max_len=%d: %d checked, %d tight, %d flagged, %d exceptions",
        max_speed, max_len, report.checked, report.tight, report.flagged, len(report.exceptions),
    )
    for v in report.exceptions:
        logger.warning("tight upper bound without a closed-form case: %s", v)
    return report


def case_for(v: SpeedVector, q: Optional[int] = None) -> Tuple[EqualityCase, EqualityCase]:
    """(upper case, q-restricted lower case) for v; q defaults to gap(v).q."""
    if q is None:
        q = exact_service.gap(v).q
    return detect_upper_equality(v), detect_lower_q_equality(v, q)
