"""Standardization, spectral vectors ζ̂_v / ζ_v and the Λ action.

Entries are stored as exponent pairs (a, b) meaning q^a t^b.
"""

from __future__ import annotations

from typing import List, Sequence, Tuple

from services.errors import IndexOutOfRange
from services.polyarith import QtFraction, qt_monomial

SpectralEntry = Tuple[int, int]
SpectralVector = Tuple[SpectralEntry, ...]


def std(v: Sequence[int]) -> Tuple[int, ...]:
    """σ with σ_i > σ_j iff v_i > v_j, or v_i = v_j and i < j."""
    n = len(v)
    return tuple(
        1 + sum(1 for j in range(n) if v[j] < v[i] or (v[j] == v[i] and j > i))
        for i in range(n)
    )


def spectre_hat(v: Sequence[int]) -> SpectralVector:
    """ζ̂_v[i] = q^{v_i} t^{std(v)_i - 1}."""
    return tuple((part, rank - 1) for part, rank in zip(v, std(v)))


def spectre_y(v: Sequence[int]) -> SpectralVector:
    """ζ_v[i] = q^{v_i} t^{std(v)_i - i}, the eigenvalues of the unhatted Y_i."""
    return tuple((part, rank - i) for i, (part, rank) in enumerate(zip(v, std(v)), start=1))


def initial_spectrum(n: int) -> SpectralVector:
    """[t^{N-1}, ..., t, 1], the spectrum of M_{0^N}."""
    return tuple((0, n - 1 - i) for i in range(n))


def lambda_step(s: SpectralVector) -> SpectralVector:
    """[a_1, ..., a_N]Λ = [a_2, ..., a_N, q a_1]."""
    qa, tb = s[0]
    return s[1:] + ((qa + 1, tb),)


def si_step(s: SpectralVector, i: int) -> SpectralVector:
    if not 1 <= i <= len(s) - 1:
        raise IndexOutOfRange(f"index {i} outside 1..{len(s) - 1}")
    w = list(s)
    w[i - 1], w[i] = w[i], w[i - 1]
    return tuple(w)


def entry_ratio(s: SpectralVector, i: int) -> SpectralEntry:
    """Exponents of s[i+1]/s[i] (1-based), the Yang parameter at position i."""
    (a1, b1), (a2, b2) = s[i - 1], s[i]
    return a2 - a1, b2 - b1


def entry_value(entry: SpectralEntry) -> QtFraction:
    return qt_monomial(*entry)


def render_entry(entry: SpectralEntry) -> str:
    a, b = entry
    parts: List[str] = []
    if a:
        parts.append("q" if a == 1 else f"q^{a}")
    if b:
        parts.append("t" if b == 1 else f"t^{b}")
    return "*".join(parts) or "1"


def render_spectrum(s: SpectralVector) -> str:
    return "[" + ", ".join(render_entry(e) for e in s) + "]"


def spectrum_to_json(s: SpectralVector) -> list:
    return [{"q": a, "t": b} for a, b in s]


def is_injective(s: SpectralVector) -> bool:
    return len(set(s)) == len(s)
