"""Specialization points q^a t^b = 1."""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from services.errors import RangeError


@dataclass(frozen=True)
class SpecPoint:
    """q = ω u^{-b/d}, t = u^{a/d} with ω = ζ_a^omega_power."""

    a: int
    b: int
    omega_power: int = 1

    def __post_init__(self) -> None:
        if self.a < 1 or self.b < 1:
            raise RangeError("specialization needs a, b >= 1")
        if gcd(self.omega_power % self.a, self.d) != 1:
            raise RangeError(
                f"omega = zeta_{self.a}^{self.omega_power} makes omega^(a/d) non-primitive (d={self.d})"
            )

    @property
    def d(self) -> int:
        return gcd(self.a, self.b)

    @property
    def q_shift(self) -> int:
        """u-exponent of q."""
        return -self.b // self.d

    @property
    def t_shift(self) -> int:
        """u-exponent of t."""
        return self.a // self.d

    @property
    def omega_exponent(self) -> int:
        return self.omega_power % self.a

    @property
    def label(self) -> str:
        q_part = "q" if self.a == 1 else f"q^{self.a}"
        t_part = "t" if self.b == 1 else f"t^{self.b}"
        return f"{q_part}*{t_part}=1"
