"""
Exact gap of loneliness.

t -> mu(t v) is piecewise linear with slopes drawn from the speeds, so its
maxima sit where two pieces cross: t in (1/q)Z with q dividing some
|v_j +- v_i|. Denominators of 2 v_i are added as well so that single-speed
vectors (and any i = j crossing) are covered; a larger candidate set cannot
change an exhaustive maximum.
"""
from __future__ import annotations

from fractions import Fraction
from math import floor
from typing import List, Set

import numpy as np

from models.gap_result import GapResult
from models.speed_vector import SpeedVector
from utils.logger import get_logger

logger = get_logger(__name__)

# p * v_i is formed in int64; keep 2 * max(v)^2 well below 2^63.
_INT64_GUARD = 1 << 62
_GRID_CHUNK = 1 << 16


def dist_to_nearest_integer(x: Fraction) -> Fraction:
    x = Fraction(x)
    frac = x - floor(x)
    return min(frac, 1 - frac)


def mu(v: SpeedVector, t: Fraction) -> Fraction:
    t = Fraction(t)
    return min(dist_to_nearest_integer(t * s) for s in v)


def _divisors(n: int) -> List[int]:
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def candidate_denominators(v: SpeedVector) -> List[int]:
    """Every q >= 2 dividing some |v_j +- v_i| (i != j) or some 2 v_i."""
    values: Set[int] = set()
    speeds = v.speeds
    for i, vi in enumerate(speeds):
        values.add(2 * vi)
        for vj in speeds[i + 1:]:
            values.add(vj - vi)
            values.add(vj + vi)
    denominators: Set[int] = set()
    for value in values:
        denominators.update(d for d in _divisors(value) if d >= 2)
    return sorted(denominators)


def candidate_times(v: SpeedVector) -> List[Fraction]:
    times = {
        Fraction(p, q)
        for q in candidate_denominators(v)
        for p in range(1, q)
    }
    return sorted(times)


def _check_overflow(v: SpeedVector) -> None:
    if 2 * v.max_speed * v.max_speed >= _INT64_GUARD:
        raise OverflowError(f"speeds up to {v.max_speed} overflow the int64 residue computation")


def gap(v: SpeedVector) -> GapResult:
    """Exhaustive maximum of mu(t v) over the candidate times.

    For a reduced p/q the value mu(p/q v) is d/q where d = min_i min(r_i, q - r_i)
    and r_i = p v_i mod q, so each denominator is handled with integer arrays.
    """
    _check_overflow(v)
    speeds = np.asarray(v.speeds, dtype=np.int64)
    best = Fraction(0)
    maximizers: List[Fraction] = []
    candidate_count = 0

    for q in candidate_denominators(v):
        p = np.arange(1, q, dtype=np.int64)
        p = p[np.gcd(p, q) == 1]
        candidate_count += int(p.size)
        residues = np.outer(p, speeds) % q
        d = np.minimum(residues, q - residues).min(axis=1)
        top = int(d.max())
        value = Fraction(top, q)
        if value < best:
            continue
        hits = [Fraction(int(pp), q) for pp in p[d == top]]
        if value > best:
            best = value
            maximizers = hits
        else:
            maximizers.extend(hits)

    maximizers.sort()
    t_min = maximizers[0]
    logger.debug("gap%s = %s at t = %s (%d candidates)", v, best, t_min, candidate_count)
    return GapResult(
        gap=best,
        t_min=t_min,
        maximizers=tuple(maximizers),
        q=t_min.denominator,
        candidate_count=candidate_count,
    )


def dense_grid_gap_lower(v: SpeedVector, N: int) -> float:
    """max_{j < N} mu((j/N) v) in floating point: never above gap(v) and
    within max(v)/(2N) of it."""
    if N < 2:
        raise ValueError(f"N must be at least 2, got {N}")
    speeds = np.asarray(v.speeds, dtype=np.int64)
    best = 0.0
    for start in range(0, N, _GRID_CHUNK):
        j = np.arange(start, min(N, start + _GRID_CHUNK), dtype=np.int64)
        # exact residues j * v_i mod N before converting keeps the grid honest
        residues = np.outer(j, speeds) % N
        dist = np.minimum(residues, N - residues).min(axis=1)
        best = max(best, float(dist.max()) / N)
    return best


def is_tight(v: SpeedVector) -> bool:
    """gap(v) = 1/n exactly."""
    return gap(v).gap == Fraction(1, v.n)


def conjecture_holds(v: SpeedVector) -> bool:
    """gap(v) >= 1/n."""
    return gap(v).gap >= Fraction(1, v.n)


def in_v_q(v: SpeedVector, q: int, result: GapResult | None = None) -> bool:
    """Some global maximizer p/q (lowest terms) lies in (0, 1/2]."""
    result = result or gap(v)
    return any(t.denominator == q and t <= Fraction(1, 2) for t in result.maximizers)

