from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isnan
from typing import Dict, Tuple

from models.speed_vector import SpeedVector

CSV_COLUMNS: Tuple[str, ...] = (
    "n",
    "speeds",
    "gap_num",
    "gap_den",
    "t_num",
    "t_den",
    "q",
    "lambda_plus",
    "lambda_plus_cert",
    "lambda_minus",
    "lambda_minus_cert",
    "lambda_minus_q",
    "lambda_minus_q_cert",
    "degree",
    "samples",
    "status_plus",
    "status_minus",
    "status_minus_q",
)

# Row-level status codes; the first four mirror BoundStatus values.
STATUS_CERTIFIED = "certified"
STATUS_SKIPPED = "skipped"
STATUS_ERROR = "error"

SANDWICH_SLACK = 1e-12


def _fmt(value: float) -> str:
    return "nan" if isnan(value) else repr(float(value))


@dataclass(frozen=True)
class ScanRow:
    """One scanned speed vector: exact gap plus the three bounds (raw LP value and certified value)."""

    v: SpeedVector
    gap: Fraction
    t_min: Fraction
    q: int
    lambda_plus: float
    lambda_plus_cert: float
    lambda_minus: float
    lambda_minus_cert: float
    lambda_minus_q: float
    lambda_minus_q_cert: float
    degree: int
    samples: int
    status_plus: str
    status_minus: str
    status_minus_q: str

    @property
    def n(self) -> int:
        return self.v.n

    def sandwich_violations(self) -> Tuple[str, ...]:
        """Names of certified bounds that fail to sandwich the exact gap."""
        g = float(self.gap)
        bad = []
        if self.status_plus == STATUS_CERTIFIED and g > self.lambda_plus_cert + SANDWICH_SLACK:
            bad.append("lambda_plus")
        if self.status_minus == STATUS_CERTIFIED and self.lambda_minus_cert - SANDWICH_SLACK > g:
            bad.append("lambda_minus")
        if self.status_minus_q == STATUS_CERTIFIED and self.lambda_minus_q_cert - SANDWICH_SLACK > g:
            bad.append("lambda_minus_q")
        return tuple(bad)

    def to_record(self) -> Dict[str, str]:
        """CSV cell strings keyed by CSV_COLUMNS."""
        return {
            "n": str(self.n),
            "speeds": self.v.label(";"),
            "gap_num": str(self.gap.numerator),
            "gap_den": str(self.gap.denominator),
            "t_num": str(self.t_min.numerator),
            "t_den": str(self.t_min.denominator),
            "q": str(self.q),
            "lambda_plus": _fmt(self.lambda_plus),
            "lambda_plus_cert": _fmt(self.lambda_plus_cert),
            "lambda_minus": _fmt(self.lambda_minus),
            "lambda_minus_cert": _fmt(self.lambda_minus_cert),
            "lambda_minus_q": _fmt(self.lambda_minus_q),
            "lambda_minus_q_cert": _fmt(self.lambda_minus_q_cert),
            "degree": str(self.degree),
            "samples": str(self.samples),
            "status_plus": self.status_plus,
            "status_minus": self.status_minus,
            "status_minus_q": self.status_minus_q,
        }

    def to_dict(self) -> dict:
        """JSON form; NaN becomes None."""
        def num(x: float):
            return None if isnan(x) else float(x)

        return {
            "n": self.n,
            "speeds": list(self.v.speeds),
            "gap_num": self.gap.numerator,
            "gap_den": self.gap.denominator,
            "t_num": self.t_min.numerator,
            "t_den": self.t_min.denominator,
            "q": self.q,
            "lambda_plus": num(self.lambda_plus),
            "lambda_plus_cert": num(self.lambda_plus_cert),
            "lambda_minus": num(self.lambda_minus),
            "lambda_minus_cert": num(self.lambda_minus_cert),
            "lambda_minus_q": num(self.lambda_minus_q),
            "lambda_minus_q_cert": num(self.lambda_minus_q_cert),
            "degree": self.degree,
            "samples": self.samples,
            "status_plus": self.status_plus,
            "status_minus": self.status_minus,
            "status_minus_q": self.status_minus_q,
        }
