from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from functools import reduce
from typing import Iterable, Iterator, Tuple

from utils.exceptions import SpeedVectorError


@dataclass(frozen=True)
class SpeedVector:
    """Strictly increasing positive integer speeds v = (v1, ..., v_{n-1}).

    The stationary runner is implicit, so n (the runner count) is len + 1.
    """

    speeds: Tuple[int, ...]

    def __post_init__(self):
        speeds = self.speeds
        if isinstance(speeds, (str, bytes)) or not isinstance(speeds, Iterable):
            raise SpeedVectorError(f"speeds must be a sequence of integers, got {speeds!r}")
        speeds = tuple(speeds)
        if not speeds:
            raise SpeedVectorError("speed vector is empty")
        for s in speeds:
            if isinstance(s, bool) or not isinstance(s, int):
                raise SpeedVectorError(f"speed {s!r} is not an integer")
        if speeds[0] < 1:
            raise SpeedVectorError(f"speeds must be positive, got {speeds[0]}")
        for left, right in zip(speeds, speeds[1:]):
            if right <= left:
                raise SpeedVectorError(
                    f"speeds must be strictly increasing, got {left} followed by {right}"
                )
        object.__setattr__(self, "speeds", speeds)

    @classmethod
    def of(cls, *speeds: int) -> "SpeedVector":
        return cls(tuple(speeds))

    @property
    def n(self) -> int:
        return len(self.speeds) + 1

    @property
    def max_speed(self) -> int:
        return self.speeds[-1]

    @property
    def content(self) -> int:
        """gcd of all speeds."""
        return reduce(gcd, self.speeds)

    def scaled(self, a: int) -> "SpeedVector":
        if a < 1:
            raise ValueError(f"dilation factor must be >= 1, got {a}")
        return SpeedVector(tuple(a * s for s in self.speeds))

    def divided(self, g: int) -> "SpeedVector":
        if g < 1 or any(s % g for s in self.speeds):
            raise ValueError(f"{g} does not divide every speed of {self.speeds}")
        return SpeedVector(tuple(s // g for s in self.speeds))

    def label(self, sep: str = ";") -> str:
        return sep.join(str(s) for s in self.speeds)

    def __iter__(self) -> Iterator[int]:
        return iter(self.speeds)

    def __len__(self) -> int:
        return len(self.speeds)

    def __contains__(self, k: object) -> bool:
        return k in self.speeds

    def __str__(self) -> str:
        return "(" + ",".join(str(s) for s in self.speeds) + ")"
