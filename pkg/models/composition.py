"""Compositions: parsing, rendering and validation."""

from __future__ import annotations

import re
from typing import Iterable, Sequence, Tuple

from services.errors import ParseError, RangeError

Composition = Tuple[int, ...]

_DIGITS_RE = re.compile(r"^\d+$")
_LIST_RE = re.compile(r"^\[?\s*\d+(\s*,\s*\d+)*\s*\]?$")


def make_composition(parts: Iterable[int]) -> Composition:
    """Tuple of nonnegative integers; raises RangeError otherwise."""
    v = tuple(int(p) for p in parts)
    if not v:
        raise RangeError("a composition needs at least one part")
    if any(p < 0 for p in v):
        raise RangeError(f"negative part in {v}")
    return v


def parse_composition(text: str) -> Composition:
    """Accept "1,0,2", "[1,0,2]" or the contiguous digit form "102"."""
    text = text.strip()
    if _DIGITS_RE.match(text) and "," not in text:
        return make_composition(int(ch) for ch in text)
    if _LIST_RE.match(text):
        return make_composition(int(p) for p in text.strip("[]").split(","))
    raise ParseError(f"not a composition: {text!r}")


def render_composition(v: Sequence[int]) -> str:
    """Contiguous digits when every part is < 10 (the "102" form), else comma-separated."""
    if all(p < 10 for p in v):
        return "".join(str(p) for p in v)
    return ",".join(str(p) for p in v)


def size(v: Sequence[int]) -> int:
    return sum(v)


def zero(n: int) -> Composition:
    return (0,) * n


def phi(v: Composition) -> Composition:
    """vΦ = (v_2, ..., v_N, v_1 + 1)."""
    return v[1:] + (v[0] + 1,)


def phi_inverse(v: Composition) -> Composition:
    """The w with wΦ = v; requires v_N >= 1."""
    if v[-1] < 1:
        raise RangeError(f"{render_composition(v)} has no Φ-predecessor")
    return (v[-1] - 1,) + v[:-1]


def swap(v: Composition, i: int) -> Composition:
    """v·s_i (1-based)."""
    w = list(v)
    w[i - 1], w[i] = w[i], w[i - 1]
    return tuple(w)


def partition(v: Sequence[int]) -> Composition:
    """v⁺, the parts sorted decreasingly."""
    return tuple(sorted(v, reverse=True))
