"""
Batch scans: seeded selection of speed vectors and one ScanRow per vector.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from functools import partial
from itertools import combinations
from math import comb, isnan
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from config import SCAN_EXCHANGE_ROUNDS, SCAN_SEED, SCAN_THREADS
from models.bound import BoundResult
from models.scan_row import STATUS_ERROR, STATUS_SKIPPED, ScanRow
from models.speed_vector import SpeedVector
from services import bounds_service, exact_service
from utils.exceptions import LonelyRunnerError
from utils.logger import get_logger
from utils.validators import validate_scan_range

logger = get_logger(__name__)

MONOTONICITY_SLACK = 1e-6
# Above this many candidates the selection switches to rejection sampling.
_ENUMERATION_LIMIT = 1_000_000

_NAN = float("nan")


def generate_vectors(
    n: int,
    max_speed: int,
    count: Optional[int] = None,
    seed: int = SCAN_SEED,
    exhaustive: bool = False,
) -> List[SpeedVector]:
    """Distinct strictly increasing vectors of n-1 speeds in 1..max_speed.

    exhaustive=True lists all of them in lexicographic order; otherwise
    `count` are drawn with numpy's seeded generator, in draw order.
    """
    validate_scan_range(n, max_speed, count, exhaustive)
    length = n - 1
    if exhaustive:
        return [SpeedVector(c) for c in combinations(range(1, max_speed + 1), length)]

    rng = np.random.default_rng(seed)
    available = comb(max_speed, length)
    if 2 * count > available and available <= _ENUMERATION_LIMIT:
        pool = list(combinations(range(1, max_speed + 1), length))
        picks = rng.choice(available, size=count, replace=False)
        return [SpeedVector(pool[int(i)]) for i in picks]

    seen = set()
    vectors: List[SpeedVector] = []
    while len(vectors) < count:
        draw = tuple(sorted(int(s) for s in rng.choice(max_speed, size=length, replace=False) + 1))
        if draw in seen:
            continue
        seen.add(draw)
        vectors.append(SpeedVector(draw))
    return vectors


def _bound_cells(run: Callable[[], BoundResult], label: str, v: SpeedVector) -> Tuple[float, float, str]:
    try:
        result = run()
    except (LonelyRunnerError, ArithmeticError, RuntimeError, ValueError) as e:
        logger.error("scan %s for %s failed: %s", label, v, e)
        return _NAN, _NAN, STATUS_ERROR
    if not result.solved:
        logger.warning("scan %s for %s: %s", label, v, result.status.value)
    return result.lp_value, result.certified_value, result.status.value


def compute_row(
    v: SpeedVector,
    degree: Optional[int] = None,
    samples: Optional[int] = None,
    exchange_rounds: int = SCAN_EXCHANGE_ROUNDS,
) -> ScanRow:
    """Exact gap and all three bounds for v; q is the denominator of the earliest maximizer."""
    exact = exact_service.gap(v)
    q = exact.q
    degree = bounds_service.default_degree(v) if degree is None else degree
    samples = bounds_service.default_samples(degree) if samples is None else samples

    plus = _bound_cells(partial(bounds_service.lambda_plus, v, degree, samples, exchange_rounds=exchange_rounds), "lambda_plus", v)
    if len(v) >= 2:
        minus = _bound_cells(partial(bounds_service.lambda_minus, v, degree, samples, exchange_rounds=exchange_rounds), "lambda_minus", v)
    else:
        minus = (_NAN, _NAN, STATUS_SKIPPED)
    if q >= 3:
        minus_q = _bound_cells(
            partial(bounds_service.lambda_minus_q, v, q, degree, samples, exchange_rounds=exchange_rounds), "lambda_minus_q", v,
        )
    else:
        minus_q = (_NAN, _NAN, STATUS_SKIPPED)

    return ScanRow(
        v=v,
        gap=exact.gap,
        t_min=exact.t_min,
        q=q,
        lambda_plus=plus[0],
        lambda_plus_cert=plus[1],
        lambda_minus=minus[0],
        lambda_minus_cert=minus[1],
        lambda_minus_q=minus_q[0],
        lambda_minus_q_cert=minus_q[1],
        degree=degree,
        samples=samples,
        status_plus=plus[2],
        status_minus=minus[2],
        status_minus_q=minus_q[2],
    )


def run_scan(
    vectors: Sequence[SpeedVector],
    degree: Optional[int] = None,
    samples: Optional[int] = None,
    threads: int = SCAN_THREADS,
    exchange_rounds: int = SCAN_EXCHANGE_ROUNDS,
) -> List[ScanRow]:
    """Rows in the order of `vectors`, computed on up to `threads` workers."""
    worker = partial(compute_row, degree=degree, samples=samples, exchange_rounds=exchange_rounds)
    logger.info("scanning %d vectors on %d thread(s)", len(vectors), threads)
    if threads <= 1:
        rows = [worker(v) for v in vectors]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(worker, vectors))
    return rows


def summarize(rows: Sequence[ScanRow]) -> dict:
    """Soundness counters for a finished scan."""
    sandwich = [str(r.v) for r in rows if r.sandwich_violations()]
    monotonicity = [
        str(r.v) for r in rows
        if not isnan(r.lambda_minus) and not isnan(r.lambda_minus_q)
        and r.lambda_minus_q < r.lambda_minus - MONOTONICITY_SLACK
    ]
    below_conjecture = [str(r.v) for r in rows if r.gap < Fraction(1, r.n)]
    counts = {}
    for series in ("plus", "minus", "minus_q"):
        tally = {}
        for r in rows:
            status = getattr(r, f"status_{series}")
            tally[status] = tally.get(status, 0) + 1
        counts[series] = tally
    summary = {
        "rows": len(rows),
        "statuses": counts,
        "sandwich_violations": sandwich,
        "monotonicity_violations": monotonicity,
        "conjecture_failures": below_conjecture,
    }
    if sandwich:
        logger.error("certified bounds fail to sandwich the gap for %s", ", ".join(sandwich))
    return summary
