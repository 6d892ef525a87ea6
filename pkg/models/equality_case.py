from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional

from models.speed_vector import SpeedVector
from models.trig_poly import TrigPoly


class EqualityKind(enum.Enum):
    ALL_ODD = "AllOdd"
    FEJER_DILATE = "FejerDilate"
    GCD_REDUCE = "GcdReduce"
    QUOTIENT_KERNEL = "QuotientKernel"
    NONE = "None"


@dataclass(frozen=True)
class EqualityCase:
    """A closed-form equality witness: the class extremum equals gap(v)."""

    kind: EqualityKind
    predicted_gap: Optional[Fraction] = None
    polynomial: Optional[TrigPoly] = field(default=None, compare=False)
    a: Optional[int] = None
    m: Optional[int] = None
    inner: Optional["EqualityCase"] = None

    @classmethod
    def none(cls) -> "EqualityCase":
        return cls(EqualityKind.NONE)

    @property
    def matched(self) -> bool:
        return self.kind is not EqualityKind.NONE

    def describe(self) -> str:
        if self.kind is EqualityKind.ALL_ODD:
            return "AllOdd"
        if self.kind is EqualityKind.FEJER_DILATE:
            return f"FejerDilate(a={self.a}, m={self.m})"
        if self.kind is EqualityKind.QUOTIENT_KERNEL:
            return f"QuotientKernel(a={self.a}, q={self.m})"
        if self.kind is EqualityKind.GCD_REDUCE:
            inner = self.inner.describe() if self.inner else "None"
            return f"GcdReduce({self.a}, {inner})"
        return "None"

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "witness": self.describe(),
            "predicted_gap": str(self.predicted_gap) if self.predicted_gap is not None else None,
            "polynomial": self.polynomial.to_list() if self.polynomial is not None else None,
        }


@dataclass(frozen=True)
class SlacknessReport:
    """Complementary slackness: support outside the speeds, values on the maximizer orbit."""

    support_defect: float
    orbit_defect: float
    t: Fraction
    gap: Fraction
    tolerance: float = 1e-8

    @property
    def support_holds(self) -> bool:
        return self.support_defect < self.tolerance

    @property
    def orbit_holds(self) -> bool:
        return self.orbit_defect < self.tolerance

    @property
    def holds(self) -> bool:
        return self.support_holds and self.orbit_holds

    def to_dict(self) -> dict:
        return {
            "support_defect": self.support_defect,
            "orbit_defect": self.orbit_defect,
            "t": str(self.t),
            "gap": str(self.gap),
            "holds": self.holds,
        }


@dataclass(frozen=True)
class ChainValues:
    """delta f^(0) >= sum_k f^(k) h(t k) >= delta^2 f(0) for f in the upper class."""

    lhs: float
    mid: float
    rhs: float

    def holds(self, tol: float = 1e-9) -> bool:
        return self.lhs >= self.mid - tol and self.mid >= self.rhs - tol

    def is_equality(self, tol: float = 1e-8) -> bool:
        return abs(self.lhs - self.mid) <= tol and abs(self.mid - self.rhs) <= tol

    def __iter__(self):
        return iter((self.lhs, self.mid, self.rhs))


@dataclass
class EqualityProbeReport:
    """Exhaustive comparison of detector hits with LP-tight vectors.

    exceptions lists vectors where the certified upper bound meets the gap
    but no closed-form case was detected; unconfirmed lists detector hits
    whose certified bound stayed away from the gap.
    """

    max_speed: int
    max_len: int
    checked: int = 0
    tight: int = 0
    flagged: int = 0
    exceptions: List[SpeedVector] = field(default_factory=list)
    unconfirmed: List[SpeedVector] = field(default_factory=list)
    uncertified: List[SpeedVector] = field(default_factory=list)

    @property
    def consistent(self) -> bool:
        return not self.exceptions and not self.unconfirmed

    def to_dict(self) -> dict:
        return {
            "max_speed": self.max_speed,
            "max_len": self.max_len,
            "checked": self.checked,
            "tight": self.tight,
            "flagged": self.flagged,
            "exceptions": [list(v.speeds) for v in self.exceptions],
            "unconfirmed": [list(v.speeds) for v in self.unconfirmed],
            "uncertified": [list(v.speeds) for v in self.uncertified],
        }
