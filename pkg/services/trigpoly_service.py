"""
Constructions and certification for even trigonometric polynomials.

The certifier turns sampled values into a rigorous minimum using the
Bernstein inequalities |f'| <= 2 pi D B and |f''| <= (2 pi D)^2 B, where
B = |c0| + 2 sum |c_k| bounds the sup norm.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import ceil, gcd
from typing import Callable, Union

import numpy as np

from config import CERT_MAX_POINTS, CERT_SLACK_REL
from models.trig_poly import CertifiedExtremum, TrigPoly
from utils.exceptions import CoefficientRecoveryError
from utils.logger import get_logger

logger = get_logger(__name__)

_RECOVERY_TOL = 1e-9
_QUOTIENT_CHECK_TOL = 1e-8
_SINGULAR_TOL = 1e-9
_EPS = np.finfo(float).eps

SampleFn = Union[TrigPoly, Callable[[float], float]]


def eval_poly(f: TrigPoly, x):
    return f.evaluate(x)


def fejer(m: int) -> TrigPoly:
    """Fejer kernel K_m = (1/m)(sin(pi m x)/sin(pi x))^2, coefficients 1 - j/m."""
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    j = np.arange(m, dtype=float)
    return TrigPoly(1.0 - j / m)


def fejer_closed_form(m: int, x):
    x = np.asarray(x, dtype=float)
    return (np.sin(np.pi * m * x) / np.sin(np.pi * x)) ** 2 / m


def cos_sq(v: int) -> TrigPoly:
    """cos(pi v x)^2 = 1/2 + (1/2) cos(2 pi v x)."""
    if v < 1:
        raise ValueError(f"v must be >= 1, got {v}")
    coeffs = np.zeros(v + 1)
    coeffs[0] = 0.5
    coeffs[v] = 0.25
    return TrigPoly(coeffs)


def dilate(f: TrigPoly, a: int) -> TrigPoly:
    """g(x) = f(a x)."""
    if a < 1:
        raise ValueError(f"dilation factor must be >= 1, got {a}")
    coeffs = np.zeros(a * f.degree + 1)
    coeffs[::a] = f.coeffs
    return TrigPoly(coeffs)


def shift_const(f: TrigPoly, s: float) -> TrigPoly:
    coeffs = f.coeffs.copy()
    coeffs[0] += s
    return TrigPoly(coeffs)


def _sample(fn: SampleFn, xs: np.ndarray) -> np.ndarray:
    try:
        values = np.asarray(fn(xs), dtype=float)
        if values.shape == xs.shape:
            return values
    except (TypeError, ValueError):
        pass
    return np.array([float(fn(float(x))) for x in xs])


def dft_coeffs(sample_fn: SampleFn, D: int, offset: float = 0.0) -> TrigPoly:
    """Recover c_0..c_D from M = 2D+1 samples at offset + j/M.

    Exact (up to roundoff) for any trigonometric polynomial of degree <= D and
    any offset. Raises CoefficientRecoveryError when the imaginary part or the
    odd part of the recovered spectrum carries more than 1e-9 of energy.
    """
    if D < 0:
        raise ValueError(f"D must be >= 0, got {D}")
    M = 2 * D + 1
    xs = offset + np.arange(M) / M
    samples = _sample(sample_fn, xs)
    ks = np.arange(-D, D + 1)
    spectrum = np.exp(-2j * np.pi * np.outer(ks, xs)) @ samples / M

    imag_energy = float(np.sqrt(np.sum(spectrum.imag ** 2)))
    positive = spectrum.real[D:]
    negative = spectrum.real[D::-1]
    odd_energy = float(np.sqrt(np.sum((positive - negative) ** 2)))
    if imag_energy > _RECOVERY_TOL or odd_energy > _RECOVERY_TOL:
        raise CoefficientRecoveryError(
            f"samples are not an even trigonometric polynomial of degree <= {D} "
            f"(imaginary energy {imag_energy:.2e}, odd energy {odd_energy:.2e})"
        )
    return TrigPoly((positive + negative) / 2.0)


def _near_quotient_singularity(xs: np.ndarray, a: int, q: int) -> bool:
    y = a * xs
    for sign in (1.0, -1.0):
        z = y + sign / q
        if np.any(np.abs(z - np.round(z)) < _SINGULAR_TOL):
            return True
    return False


def quotient_kernel(a: int, q: int) -> TrigPoly:
    """K_q(a x) (1 - cos(pi/q)^2) / (cos(pi a x)^2 - cos(pi/q)^2) as an explicit polynomial.

    The denominator vanishes where a x = +-1/q mod 1; K_q has a double zero
    there, so the quotient is a trigonometric polynomial of degree <= a (q - 1)
    and is recovered from samples that avoid those points.
    """
    if a < 1 or q < 3:
        raise ValueError(f"need a >= 1 and q >= 3, got a={a}, q={q}")
    if gcd(a, q) != 1:
        raise ValueError(f"a={a} and q={q} must be coprime")

    kernel = fejer(q)
    c2 = np.cos(np.pi / q) ** 2

    def quotient(x):
        y = a * np.asarray(x, dtype=float)
        return kernel.evaluate(y) * (1.0 - c2) / (np.cos(np.pi * y) ** 2 - c2)

    D = a * (q - 1)
    M = 2 * D + 1
    offset = 0.0
    if _near_quotient_singularity(np.arange(M) / M, a, q):
        offset = 1.0 / (4 * M)
        logger.debug("quotient kernel a=%d q=%d: sampling grid shifted by %.3g", a, q, offset)

    f = dft_coeffs(quotient, D, offset=offset)
    at_zero = f.value_at_zero()
    if abs(at_zero - q) > _QUOTIENT_CHECK_TOL or abs(f.mass - 1.0) > _QUOTIENT_CHECK_TOL:
        raise CoefficientRecoveryError(
            f"quotient kernel a={a} q={q}: f(0)={at_zero:.12g} (want {q}), mass={f.mass:.12g} (want 1)"
        )
    return f


def rigorous_min(f: TrigPoly, lo: float, hi: float) -> CertifiedExtremum:
    """Certified lower bound for min f on [lo, hi].

    Each grid interval [a, b] of width h gets the bound
        max((f(a)+f(b))/2 - L1 h/2,  min(f(a), f(b)) - L2 h^2/8)
    with L1 = 2 pi D B and L2 = (2 pi D)^2 B. Intervals whose bound sits more
    than CERT_SLACK_REL * max(1, B) below the best sample are bisected until
    they do not, or until CERT_MAX_POINTS evaluations have been spent.
    """
    if not hi > lo:
        raise ValueError(f"need lo < hi, got [{lo}, {hi}]")
    D = f.degree
    B = f.sup_norm_bound()
    L1 = 2.0 * np.pi * D * B
    L2 = (2.0 * np.pi * D) ** 2 * B
    target = CERT_SLACK_REL * max(1.0, B)
    if D == 0:
        return CertifiedExtremum(
            bound=f.mass, grid_points=1, sup_norm_bound=B, derivative_bound=0.0,
            margin=0.0, lo=lo, hi=hi, sample_min=f.mass, argmin=lo,
        )
    roundoff = 8.0 * _EPS * (D + 1) * max(1.0, B)

    intervals = max(64, int(ceil((hi - lo) * 16 * D)))
    xs = np.linspace(lo, hi, intervals + 1)
    fs = f.evaluate(xs)
    evaluations = xs.size
    best = int(np.argmin(fs))
    sample_min, argmin = float(fs[best]), float(xs[best])

    a, b, fa, fb = xs[:-1], xs[1:], fs[:-1], fs[1:]
    bound = np.inf
    capped = False
    while True:
        h = b - a
        lb = np.maximum((fa + fb) / 2.0 - L1 * h / 2.0, np.minimum(fa, fb) - L2 * h * h / 8.0)
        need = lb < sample_min - target
        if (~need).any():
            bound = min(bound, float(lb[~need].min()))
        if not need.any():
            break
        if evaluations + int(need.sum()) > CERT_MAX_POINTS:
            capped = True
            bound = min(bound, float(lb[need].min()))
            break
        a, b, fa, fb = a[need], b[need], fa[need], fb[need]
        mid = (a + b) / 2.0
        fm = f.evaluate(mid)
        evaluations += mid.size
        k = int(np.argmin(fm))
        if fm[k] < sample_min:
            sample_min, argmin = float(fm[k]), float(mid[k])
        a, b = np.concatenate([a, mid]), np.concatenate([mid, b])
        fa, fb = np.concatenate([fa, fm]), np.concatenate([fm, fb])

    bound -= roundoff
    if capped:
        logger.warning(
            "rigorous_min hit the %d-evaluation cap on [%.4g, %.4g]; margin %.3e",
            CERT_MAX_POINTS, lo, hi, sample_min - bound,
        )
    return CertifiedExtremum(
        bound=bound,
        grid_points=evaluations,
        sup_norm_bound=B,
        derivative_bound=L1,
        margin=sample_min - bound,
        lo=lo,
        hi=hi,
        sample_min=sample_min,
        argmin=argmin,
        second_derivative_bound=L2,
        capped=capped,
    )


def rigorous_max(f: TrigPoly, lo: float, hi: float) -> float:
    """Certified upper bound for max f on [lo, hi]."""
    return -rigorous_min(f.scaled(-1.0), lo, hi).bound


def hat(delta: float, x):
    """Periodized hat (delta - ||x||)_+."""
    x = np.asarray(x, dtype=float)
    dist = np.abs(x - np.round(x))
    out = np.maximum(delta - dist, 0.0)
    return float(out) if out.ndim == 0 else out


def hat_coeff(delta: float, k: int) -> float:
    if k == 0:
        return delta * delta
    return float((np.sin(np.pi * delta * k) / (np.pi * k)) ** 2)


@dataclass(frozen=True)
class QuotientSignReport:
    a: int
    q: int
    sample_max: float
    certified_max: float
    argmax: float

    @property
    def nonpositive(self) -> bool:
        """f <= 0 on [1/q, 1/2] up to 1e-9."""
        return self.sample_max <= 1e-9


def quotient_kernel_sign_report(a: int, q: int) -> QuotientSignReport:
    """How far the quotient kernel rises above zero on [1/q, 1/2]."""
    f = quotient_kernel(a, q)
    ext = rigorous_min(f.scaled(-1.0), 1.0 / q, 0.5)
    report = QuotientSignReport(
        a=a, q=q, sample_max=-ext.sample_min, certified_max=-ext.bound, argmax=ext.argmin,
    )
    logger.info(
        "quotient kernel a=%d q=%d: max on [1/q, 1/2] = %.6g at x=%.6g",
        a, q, report.sample_max, report.argmax,
    )
    return report
