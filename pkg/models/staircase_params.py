"""Staircase / quasi-staircase parameters."""

from __future__ import annotations

from dataclasses import dataclass

from services.errors import RangeError


@dataclass(frozen=True)
class StaircaseParams:
    """k: block width, a: step height, n: levels, m: current level, b: current raise."""

    k: int
    a: int
    n: int
    m: int = 0
    b: int = 0

    def __post_init__(self) -> None:
        if self.k < 1 or self.a < 1 or self.n < 1:
            raise RangeError("staircase needs k, a, n >= 1")
        if not 0 <= self.m <= self.n:
            raise RangeError(f"level m={self.m} outside 0..{self.n}")
        if not 0 <= self.b <= self.a:
            raise RangeError(f"raise b={self.b} outside 0..{self.a}")

    @property
    def nvars(self) -> int:
        return self.n * self.k

    @property
    def target_factor(self) -> tuple:
        """(a, k + 1), the pole the staircase never reaches."""
        return self.a, self.k + 1
