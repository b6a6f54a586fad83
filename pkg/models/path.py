"""Yang–Baxter graph steps and paths."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Tuple, Union

from models.composition import Composition, parse_composition, render_composition
from services.errors import ParseError, RangeError


@dataclass(frozen=True)
class Swap:
    """Swap edge v -> v·s_i, valid when v_i < v_{i+1}."""

    i: int

    @property
    def label(self) -> str:
        return f"s{self.i}"


@dataclass(frozen=True)
class Phi:
    """Affine edge v -> vΦ."""

    @property
    def label(self) -> str:
        return "Phi"


@dataclass(frozen=True)
class JumpSegment:
    """Declared block jump u'a^k b^ℓ u'' -> u'b^ℓ a^k u'' starting at position ``pos``.

    ``dual`` selects the J†-route (moving the a's right) instead of the J-route
    (moving the b's left); both land on the same vertex.
    """

    pos: int
    k: int
    ell: int
    dual: bool = False

    def __post_init__(self) -> None:
        if self.pos < 1 or self.k < 1 or self.ell < 1:
            raise RangeError("jump needs pos, k, ell >= 1")

    @property
    def label(self) -> str:
        name = "jump†" if self.dual else "jump"
        return f"{name}({self.pos};{self.k},{self.ell})"


Step = Union[Swap, Phi, JumpSegment]


@dataclass(frozen=True)
class Path:
    """A start vertex and a sequence of steps."""

    start: Composition
    steps: Tuple[Step, ...] = ()

    @classmethod
    def of(cls, start: Composition, steps: Iterable[Step] = ()) -> "Path":
        return cls(tuple(start), tuple(steps))

    @property
    def nvars(self) -> int:
        return len(self.start)

    @property
    def labels(self) -> list:
        return [step.label for step in self.steps]

    def has_jumps(self) -> bool:
        return any(isinstance(step, JumpSegment) for step in self.steps)

    def extended(self, steps: Iterable[Step]) -> "Path":
        return Path(self.start, self.steps + tuple(steps))

    def __len__(self) -> int:
        return len(self.steps)

    def __str__(self) -> str:
        return f"{render_composition(self.start)} {' '.join(self.labels)}".strip()


_SWAP_RE = re.compile(r"^s(\d+)$")
_JUMP_RE = re.compile(r"^jump(†|d|dual)?\((\d+);(\d+),(\d+)\)$")


def parse_step(token: str) -> Step:
    """"s2", "Phi" (or "Φ"), "jump(2;2,2)" or "jump†(2;2,2)" ("jumpd" also accepted)."""
    token = token.strip()
    if token in ("Phi", "phi", "Φ"):
        return Phi()
    match = _SWAP_RE.match(token)
    if match:
        return Swap(int(match.group(1)))
    match = _JUMP_RE.match(token)
    if match:
        return JumpSegment(int(match.group(2)), int(match.group(3)), int(match.group(4)), bool(match.group(1)))
    raise ParseError(f"not a path step: {token!r}")


def parse_path(text: str) -> Path:
    """"<start> <step> <step> ...", e.g. "000 Phi s2" or "022330 jump(2;2,2)"."""
    tokens = text.split()
    if not tokens:
        raise ParseError("empty path")
    return Path.of(parse_composition(tokens[0]), [parse_step(tok) for tok in tokens[1:]])
