from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Tuple


@dataclass(frozen=True)
class GapResult:
    gap: Fraction
    t_min: Fraction
    maximizers: Tuple[Fraction, ...]
    q: int
    candidate_count: int

    @property
    def b(self) -> int:
        """Denominator of the gap; always divides q."""
        return self.gap.denominator

    @property
    def p(self) -> int:
        return self.t_min.numerator

    def orbit(self) -> Tuple[Fraction, ...]:
        """Points k*p/q mod 1 for k in {1,...,q-1} not divisible by b."""
        return tuple(
            (k * self.t_min) % 1 for k in range(1, self.q) if k % self.b
        )

    def to_dict(self) -> dict:
        return {
            "gap": str(self.gap),
            "t_min": str(self.t_min),
            "maximizers": [str(t) for t in self.maximizers],
            "q": self.q,
            "candidate_count": self.candidate_count,
        }
