from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from utils.exceptions import MalformedProgramError


class Relation(enum.Enum):
    LE = "<="
    EQ = "="
    GE = ">="


class LpStatus(enum.Enum):
    OPTIMAL = "Optimal"
    INFEASIBLE = "Infeasible"
    UNBOUNDED = "Unbounded"


@dataclass(frozen=True, eq=False)
class Constraint:
    coefficients: np.ndarray
    relation: Relation
    rhs: float


@dataclass(eq=False)
class LinearProgram:
    """Dense linear program: minimize objective . x subject to the constraints
    and lower[i] <= x[i] <= upper[i] (either side may be infinite)."""

    num_vars: int
    objective: np.ndarray
    constraints: List[Constraint] = field(default_factory=list)
    lower: Optional[np.ndarray] = None
    upper: Optional[np.ndarray] = None

    def __post_init__(self):
        self.objective = np.asarray(self.objective, dtype=float).reshape(-1)
        if self.lower is None:
            self.lower = np.zeros(self.num_vars)
        if self.upper is None:
            self.upper = np.full(self.num_vars, np.inf)
        self.lower = np.asarray(self.lower, dtype=float).reshape(-1)
        self.upper = np.asarray(self.upper, dtype=float).reshape(-1)

    @classmethod
    def free(cls, num_vars: int, objective: Sequence[float]) -> "LinearProgram":
        return cls(
            num_vars=num_vars,
            objective=np.asarray(objective, dtype=float),
            lower=np.full(num_vars, -np.inf),
            upper=np.full(num_vars, np.inf),
        )

    def add(self, coefficients: Sequence[float], relation: Relation, rhs: float) -> None:
        self.constraints.append(
            Constraint(np.asarray(coefficients, dtype=float).reshape(-1), relation, float(rhs))
        )

    def count(self, relation: Relation) -> int:
        return sum(1 for c in self.constraints if c.relation is relation)

    def validate(self) -> None:
        if not isinstance(self.num_vars, int) or self.num_vars < 1:
            raise MalformedProgramError(f"num_vars must be a positive integer, got {self.num_vars!r}")
        if self.objective.size != self.num_vars:
            raise MalformedProgramError(
                f"objective has {self.objective.size} entries, expected {self.num_vars}"
            )
        if not np.all(np.isfinite(self.objective)):
            raise MalformedProgramError("objective holds NaN or infinite entries")
        for name, bounds in (("lower", self.lower), ("upper", self.upper)):
            if bounds.size != self.num_vars:
                raise MalformedProgramError(f"{name} bounds have {bounds.size} entries, expected {self.num_vars}")
            if np.any(np.isnan(bounds)):
                raise MalformedProgramError(f"{name} bounds hold NaN")
        if np.any(self.lower == np.inf) or np.any(self.upper == -np.inf):
            raise MalformedProgramError("variable bounds point the wrong way at infinity")
        if np.any(self.lower > self.upper):
            raise MalformedProgramError("a lower bound exceeds its upper bound")
        for i, con in enumerate(self.constraints):
            if not isinstance(con.relation, Relation):
                raise MalformedProgramError(f"constraint {i} has unknown relation {con.relation!r}")
            if con.coefficients.size != self.num_vars:
                raise MalformedProgramError(
                    f"constraint {i} has {con.coefficients.size} coefficients, expected {self.num_vars}"
                )
            if not np.all(np.isfinite(con.coefficients)) or not math.isfinite(con.rhs):
                raise MalformedProgramError(f"constraint {i} holds NaN or infinite data")

    def max_violation(self, x: np.ndarray) -> float:
        """Largest violation of any constraint or bound at x (0 when feasible)."""
        worst = 0.0
        for con in self.constraints:
            lhs = float(con.coefficients @ x)
            if con.relation is Relation.LE:
                worst = max(worst, lhs - con.rhs)
            elif con.relation is Relation.GE:
                worst = max(worst, con.rhs - lhs)
            else:
                worst = max(worst, abs(lhs - con.rhs))
        worst = max(worst, float(np.max(self.lower - x, initial=0.0)))
        worst = max(worst, float(np.max(x - self.upper, initial=0.0)))
        return worst


@dataclass(frozen=True, eq=False)
class LpOutcome:
    status: LpStatus
    solution: Optional[np.ndarray] = None
    objective_value: Optional[float] = None
    iterations: int = 0

    @property
    def is_optimal(self) -> bool:
        return self.status is LpStatus.OPTIMAL

    def summary(self) -> Tuple[str, Optional[float]]:
        return self.status.value, self.objective_value
