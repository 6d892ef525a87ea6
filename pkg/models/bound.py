from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Tuple

from models.speed_vector import SpeedVector
from models.trig_poly import TrigPoly
from utils.exceptions import BoundSpecError


class BoundStatus(enum.Enum):
    CERTIFIED = "certified"
    SOLVED_UNCERTIFIED = "solved_uncertified"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


class BoundKind(enum.Enum):
    UPPER = "upper"
    LOWER = "lower"
    LOWER_Q = "lower-q"


@dataclass(frozen=True)
class BoundSpec:
    """One linear program of the family: sign epsilon, optional q, degree D, N samples."""

    v: SpeedVector
    epsilon: int
    degree: int
    samples: int
    q: Optional[int] = None
    certify: bool = True

    def __post_init__(self):
        if self.epsilon not in (1, -1):
            raise BoundSpecError(f"epsilon must be +1 or -1, got {self.epsilon}")
        if self.degree < self.v.max_speed:
            raise BoundSpecError(
                f"degree {self.degree} is below max(v) = {self.v.max_speed}"
            )
        if self.samples < 2:
            raise BoundSpecError(f"need at least 2 samples, got {self.samples}")
        if self.q is not None:
            if self.epsilon != -1:
                raise BoundSpecError("the q-restricted class only exists for epsilon = -1")
            if self.q < 3:
                raise BoundSpecError(f"q must be >= 3, got {self.q}")
        elif self.epsilon == -1 and len(self.v) < 2:
            raise BoundSpecError("epsilon = -1 needs at least two speeds")

    @property
    def kind(self) -> BoundKind:
        if self.epsilon == 1:
            return BoundKind.UPPER
        return BoundKind.LOWER if self.q is None else BoundKind.LOWER_Q

    @property
    def region(self) -> Tuple[float, float]:
        """Interval on which epsilon * f >= 0 is imposed."""
        if self.epsilon == 1:
            return 0.0, 0.5
        if self.q is not None:
            return 1.0 / self.q, 0.5
        s = self.v.speeds
        return 1.0 / (s[-1] + s[-2]), 0.5

    @property
    def region_exact(self) -> Tuple[Fraction, Fraction]:
        if self.epsilon == 1:
            return Fraction(0), Fraction(1, 2)
        if self.q is not None:
            return Fraction(1, self.q), Fraction(1, 2)
        s = self.v.speeds
        return Fraction(1, s[-1] + s[-2]), Fraction(1, 2)

    def allowed_support(self) -> Tuple[int, ...]:
        """Indices whose coefficient sign is unconstrained: 0 and the speeds."""
        return (0,) + self.v.speeds


@dataclass(frozen=True)
class BoundResult:
    spec: BoundSpec
    status: BoundStatus
    lp_value: float = float("nan")
    polynomial: Optional[TrigPoly] = field(default=None, compare=False)
    certified_value: float = float("nan")
    repair_shift: float = 0.0
    coefficient_repair: float = 0.0
    defect: float = 0.0
    audit_min: float = float("nan")
    active_degree: int = 0
    exchange_rounds: int = 0
    extra_points: int = 0

    @property
    def epsilon(self) -> int:
        return self.spec.epsilon

    @property
    def q(self) -> Optional[int]:
        return self.spec.q

    @property
    def degree(self) -> int:
        return self.spec.degree

    @property
    def samples(self) -> int:
        return self.spec.samples

    @property
    def region(self) -> Tuple[float, float]:
        return self.spec.region

    @property
    def assumes_v_q(self) -> bool:
        """The q-variant is a lower bound only for vectors in V_q."""
        return self.spec.q is not None

    @property
    def is_certified(self) -> bool:
        return self.status is BoundStatus.CERTIFIED

    @property
    def solved(self) -> bool:
        return self.status in (BoundStatus.CERTIFIED, BoundStatus.SOLVED_UNCERTIFIED)

    def to_dict(self) -> dict:
        return {
            "kind": self.spec.kind.value,
            "speeds": list(self.spec.v.speeds),
            "epsilon": self.epsilon,
            "q": self.q,
            "degree": self.degree,
            "samples": self.samples,
            "region": list(self.region),
            "status": self.status.value,
            "lp_value": self.lp_value,
            "certified_value": self.certified_value,
            "repair_shift": self.repair_shift,
            "coefficient_repair": self.coefficient_repair,
            "defect": self.defect,
            "audit_min": self.audit_min,
            "active_degree": self.active_degree,
            "exchange_rounds": self.exchange_rounds,
            "extra_points": self.extra_points,
            "assumes_v_q": self.assumes_v_q,
        }
