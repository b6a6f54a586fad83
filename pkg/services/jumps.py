"""Jump operators J and J†, composite block jumps and their divisor bounds.

A block jump moves u'a^k b^ℓ u'' to u'b^ℓ a^k u''. Along the J-route the b's
travel left one at a time, each through an elementary jump

    J^γ_{m+1,k} = T_{m+k}···T_{m+1} + (1 - t)/(1 - γ) (1 + Σ_{i=2..k} T_{m+k}···T_{m+i})

and along the J†-route the a's travel right, each through

    J†^γ_{m+1,ℓ} = T_{m+1}···T_{m+ℓ} + (1 - t)/(1 - γ) (1 + Σ_{i=1..ℓ-1} T_{m+1}···T_{m+i}).

γ is always the spectral ratio of the last elementary swap of the move.
"""

from __future__ import annotations

import logging
from typing import List, Sequence, Tuple

from models.composition import Composition, make_composition, render_composition
from models.jump_spec import JumpSpec
from models.path import JumpSegment, Swap
from services.errors import IndexOutOfRange, InvalidStep, SpectralMismatch
from services.hecke import apply_Ti, apply_yang, yang_shift
from services.polyarith import QT_FIELD, FactoredQt, FactorKey, MacPoly, QtFraction, T, qt_monomial
from services.spectral import SpectralEntry, entry_ratio, entry_value, si_step, spectre_hat
from services.ybgraph import jump_block_values, jump_swaps, step_apply

logger = logging.getLogger(__name__)

YangFactor = Tuple[SpectralEntry, int]


def _spectral_ratio(v: Composition, i: int, j: int) -> SpectralEntry:
    """Exponents of ζ̂_v[j] / ζ̂_v[i] (1-based)."""
    s = spectre_hat(v)
    return s[j - 1][0] - s[i - 1][0], s[j - 1][1] - s[i - 1][1]


def _check_window(p: MacPoly, m1: int, width: int) -> None:
    if m1 < 1 or width < 1 or m1 + width > p.nvars:
        raise IndexOutOfRange(f"jump window {m1}..{m1 + width} outside 1..{p.nvars}")


# ── Elementary jumps ───────────────────────────────────────────────────────────

def elem_jump(p: MacPoly, m1: int, k: int, gamma: QtFraction) -> MacPoly:
    """p·J^γ_{m1,k}: the b right after an a^k block starting at m1 moves to m1."""
    _check_window(p, m1, k)
    shift = yang_shift(gamma)
    word = p
    partial_sum = p
    for i in range(m1 + k - 1, m1, -1):
        word = apply_Ti(word, i)
        partial_sum = partial_sum + word
    return apply_Ti(word, m1) + partial_sum * shift


def elem_jump_dual(p: MacPoly, m1: int, ell: int, gamma: QtFraction) -> MacPoly:
    """p·J†^γ_{m1,ℓ}: the a at m1 moves right past the b^ℓ block."""
    _check_window(p, m1, ell)
    shift = yang_shift(gamma)
    word = p
    partial_sum = p
    for i in range(m1, m1 + ell - 1):
        word = apply_Ti(word, i)
        partial_sum = partial_sum + word
    return apply_Ti(word, m1 + ell - 1) + partial_sum * shift


def elem_jump_parameter(v: Sequence[int], m1: int, k: int) -> QtFraction:
    """γ for J at (m1, k) on v = u'a^k b u'': ζ̂_v[m1+k] / ζ̂_v[m1]."""
    return qt_monomial(*_spectral_ratio(make_composition(v), m1, m1 + k))


def elem_jump_dual_parameter(v: Sequence[int], m1: int, ell: int) -> QtFraction:
    """γ for J† at (m1, ℓ) on v = u'a b^ℓ u'': ζ̂_v[m1+ℓ] / ζ̂_v[m1]."""
    return qt_monomial(*_spectral_ratio(make_composition(v), m1, m1 + ell))


# ── Specs ──────────────────────────────────────────────────────────────────────

def jump_spec(v: Sequence[int], pos: int, k: int, ell: int) -> JumpSpec:
    """Read a, b, α, β off v for the block a^k b^ℓ starting at ``pos``."""
    v = make_composition(v)
    a, b = jump_block_values(v, JumpSegment(pos, k, ell))
    s = spectre_hat(v)
    m = pos - 1
    return JumpSpec(pos, k, ell, a, b, s[m + k - 1][1], s[m + k][1])


def validate_spec(v: Sequence[int], spec: JumpSpec) -> None:
    """Raise SpectralMismatch unless ``spec`` describes vertex v exactly."""
    try:
        actual = jump_spec(v, spec.pos, spec.k, spec.ell)
    except InvalidStep as exc:
        raise SpectralMismatch(str(exc)) from exc
    if actual != spec:
        raise SpectralMismatch(f"{spec} does not match {render_composition(make_composition(v))} (expected {actual})")


def segment_of(spec: JumpSpec, dual: bool = False) -> JumpSegment:
    return JumpSegment(spec.pos, spec.k, spec.ell, dual)


# ── Block jumps ────────────────────────────────────────────────────────────────

def block_jump(p: MacPoly, v: Sequence[int], spec: JumpSpec) -> MacPoly:
    """M_{u'a^k b^ℓ u''} -> M_{u'b^ℓ a^k u''} along the J-route (b's move left)."""
    v = make_composition(v)
    validate_spec(v, spec)
    m = spec.m
    for j in range(spec.ell):
        m1 = m + j + 1
        p = elem_jump(p, m1, spec.k, elem_jump_parameter(v, m1, spec.k))
        v = v[:m1 - 1] + (v[m1 + spec.k - 1],) + v[m1 - 1:m1 + spec.k - 1] + v[m1 + spec.k:]
    return p


def block_jump_dual(p: MacPoly, v: Sequence[int], spec: JumpSpec) -> MacPoly:
    """Same endpoint as :func:`block_jump`, along the J†-route (a's move right)."""
    v = make_composition(v)
    validate_spec(v, spec)
    m = spec.m
    for r in range(spec.k - 1, -1, -1):
        m1 = m + r + 1
        p = elem_jump_dual(p, m1, spec.ell, elem_jump_dual_parameter(v, m1, spec.ell))
        v = v[:m1 - 1] + v[m1:m1 + spec.ell] + (v[m1 - 1],) + v[m1 + spec.ell:]
    return p


def jump_path_operator(v: Sequence[int], spec: JumpSpec, dual: bool = False) -> List[YangFactor]:
    """The ordered Yang factors ((a, b) of α, swap index) realizing the jump."""
    v = make_composition(v)
    validate_spec(v, spec)
    s = spectre_hat(v)
    factors: List[YangFactor] = []
    for i in jump_swaps(segment_of(spec, dual)):
        factors.append((entry_ratio(s, i), i))
        v = step_apply(v, Swap(i))
        s = si_step(s, i)
    return factors


def apply_yang_factors(p: MacPoly, factors: Sequence[YangFactor]) -> MacPoly:
    for (qa, tb), i in factors:
        p = apply_yang(p, i, entry_value((qa, tb)))
    return p


# ── Divisor bounds ─────────────────────────────────────────────────────────────

def block_divisor_bound(spec: JumpSpec) -> FactoredQt:
    """prod_{i=max(k,ℓ)-1}^{k+ℓ-2} (1 - q^{b-a} t^{β-α-i})."""
    factors: List[Tuple[FactorKey, int]] = []
    for i in range(max(spec.k, spec.ell) - 1, spec.k + spec.ell - 1):
        factors.append(((spec.gap, spec.spread - i), 1))
    return FactoredQt.build(factors)


def jump_lemma_bound(v: Sequence[int], m1: int, k: int) -> FactoredQt:
    """(1 - q^{b-a} t^{β-α-k+1}) for u'a^k b u'' -> u'b a^k u''."""
    return block_divisor_bound(jump_spec(v, m1, k, 1))


def dual_jump_lemma_bound(v: Sequence[int], m1: int, ell: int) -> FactoredQt:
    """(1 - q^{b-a} t^{β-α-ℓ+1}) for u'a b^ℓ u'' -> u'b^ℓ a u''."""
    return block_divisor_bound(jump_spec(v, m1, 1, ell))


def absorbs_symmetric(p: MacPoly, i: int, alpha: QtFraction) -> bool:
    """p·Yang(α, i) == (1 - tα)/(1 - α) · p, valid when p·T_i = t·p."""
    scale = (QT_FIELD.one - T * alpha) / (QT_FIELD.one - alpha)
    return apply_yang(p, i, alpha) == p * scale
