"""The Yang–Baxter graph: steps, paths, path walking and the orders ⊳ / dominance.

M_{0^N} = 1, M_{v s_i} = M_v·Yang(ζ̂_v[i+1]/ζ̂_v[i], i) when v_i < v_{i+1},
and M_{vΦ} = M_v·A.
"""

from __future__ import annotations

import json
import logging
import random
from pathlib import Path as FsPath
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from models.composition import (
    Composition,
    make_composition,
    partition,
    phi,
    phi_inverse,
    render_composition,
    swap,
    zero,
)
from models.path import JumpSegment, Path, Phi, Step, Swap
from services import settings
from services.errors import IndexOutOfRange, InvalidStep, NvarsMismatch, ReplayMismatch
from services.hecke import apply_aff, apply_yang, apply_Yhat
from services.polyarith import MacPoly, QtFraction, mac_from_json, mac_to_json, qt_monomial
from services.spectral import SpectralVector, entry_ratio, entry_value, lambda_step, si_step, spectre_hat

logger = logging.getLogger(__name__)

_MAC_MEMO: Dict[Composition, MacPoly] = {}
_CACHE_DIR: Optional[FsPath] = None
_CACHE_VERSION: int = int(settings.section("cache").get("version", 1))

ElementaryStep = Tuple[Composition, Step]


# ── Steps ──────────────────────────────────────────────────────────────────────

def _check_swap(v: Composition, i: int) -> None:
    if not 1 <= i <= len(v) - 1:
        raise IndexOutOfRange(f"s{i} outside 1..{len(v) - 1}")
    if not v[i - 1] < v[i]:
        raise InvalidStep(f"s{i} needs v_{i} < v_{i + 1} at {render_composition(v)}", i)


def jump_block_values(v: Composition, seg: JumpSegment) -> Tuple[int, int]:
    """(a, b) of a declared jump, validating the a^k b^ℓ block shape."""
    m = seg.pos - 1
    if m + seg.k + seg.ell > len(v):
        raise InvalidStep(f"{seg.label} does not fit in {render_composition(v)}", seg.pos)
    a_block = v[m:m + seg.k]
    b_block = v[m + seg.k:m + seg.k + seg.ell]
    if len(set(a_block)) != 1 or len(set(b_block)) != 1 or not a_block[0] < b_block[0]:
        raise InvalidStep(f"{seg.label} needs a^k b^ℓ with a < b at {render_composition(v)}", seg.pos)
    return a_block[0], b_block[0]


def jump_swaps(seg: JumpSegment) -> List[int]:
    """Swap indices realizing a declared jump along its route."""
    m = seg.pos - 1
    indices: List[int] = []
    if not seg.dual:
        for j in range(seg.ell):
            indices.extend(range(m + seg.k + j, m + j, -1))
    else:
        for r in range(seg.k - 1, -1, -1):
            indices.extend(range(m + r + 1, m + r + seg.ell + 1))
    return indices


def step_apply(v: Composition, step: Step) -> Composition:
    """v·s_i, vΦ, or the endpoint of a declared jump."""
    if isinstance(step, Phi):
        return phi(v)
    if isinstance(step, Swap):
        _check_swap(v, step.i)
        return swap(v, step.i)
    if isinstance(step, JumpSegment):
        jump_block_values(v, step)
        m = step.pos - 1
        head, a_block = v[:m], v[m:m + step.k]
        b_block, tail = v[m + step.k:m + step.k + step.ell], v[m + step.k + step.ell:]
        return head + b_block + a_block + tail
    raise TypeError(f"unknown step {step!r}")


def elementary_steps(path: Path) -> Iterator[ElementaryStep]:
    """(vertex, Swap|Phi) pairs with jumps expanded into their swap routes."""
    v = path.start
    for step in path.steps:
        if isinstance(step, JumpSegment):
            jump_block_values(v, step)
            for i in jump_swaps(step):
                yield v, Swap(i)
                v = step_apply(v, Swap(i))
        else:
            yield v, step
            v = step_apply(v, step)


def path_vertices(path: Path) -> List[Composition]:
    """Start vertex followed by the vertex after each declared step."""
    vertices = [path.start]
    for step in path.steps:
        vertices.append(step_apply(vertices[-1], step))
    return vertices


def replay(path: Path) -> Composition:
    """Endpoint of the path; validates every elementary step."""
    v = path.start
    for w, step in elementary_steps(path):
        v = step_apply(w, step)
    return v


def render_path(path: Path) -> str:
    """"000 -Phi-> 001 -s2-> 010 ..." with jump labels where declared."""
    vertices = path_vertices(path)
    text = render_composition(vertices[0])
    for step, w in zip(path.steps, vertices[1:]):
        text += f" -{step.label}-> {render_composition(w)}"
    return text


def path_to_json(path: Path) -> dict:
    return {"start": list(path.start), "steps": path.labels}


# ── Path construction ──────────────────────────────────────────────────────────

def _reverse_step(v: Composition, rng: Optional[random.Random]) -> Tuple[Composition, Step]:
    descents = [i for i in range(1, len(v)) if v[i - 1] > v[i]]
    options: List[Step] = [Swap(i) for i in descents]
    if rng is None:
        if descents:
            return swap(v, descents[0]), Swap(descents[0])
        return phi_inverse(v), Phi()
    if v[-1] >= 1:
        options.append(Phi())
    choice = rng.choice(options)
    if isinstance(choice, Swap):
        return swap(v, choice.i), choice
    return phi_inverse(v), choice


def _reduce_to_zero(v: Sequence[int], rng: Optional[random.Random]) -> Path:
    v = make_composition(v)
    steps: List[Step] = []
    while any(v):
        v, step = _reverse_step(v, rng)
        steps.append(step)
    steps.reverse()
    return Path.of(zero(len(v)), steps)


def canonical_path(v: Sequence[int]) -> Path:
    """Path from 0^N to v by reverse reduction (smallest descent first, else Φ⁻¹)."""
    return _reduce_to_zero(v, None)


def random_path(v: Sequence[int], rng: random.Random) -> Path:
    """Another valid path from 0^N to v, choosing reverse steps at random."""
    return _reduce_to_zero(v, rng)


def walk_spectrum(path: Path, start: Optional[SpectralVector] = None) -> SpectralVector:
    """Spectral vector at the end of the path, walked with Λ / s_i."""
    s = start if start is not None else spectre_hat(path.start)
    for _, step in elementary_steps(path):
        s = lambda_step(s) if isinstance(step, Phi) else si_step(s, step.i)
    return s


# ── Macdonald polynomials ──────────────────────────────────────────────────────

def yang_parameter(v: Composition, i: int) -> QtFraction:
    """α = ζ̂_v[i+1]/ζ̂_v[i] for the swap at position i of vertex v."""
    return entry_value(entry_ratio(spectre_hat(v), i))


def walk(p: MacPoly, v: Composition, step: Step) -> MacPoly:
    """Apply one elementary step's operator to p = M_v."""
    if isinstance(step, Phi):
        return apply_aff(p)
    _check_swap(v, step.i)
    return apply_yang(p, step.i, yang_parameter(v, step.i))


def mac_along(path: Path, start_poly: Optional[MacPoly] = None) -> MacPoly:
    """Walk ``path`` from M_start (computed when not given) and return the endpoint polynomial."""
    p = start_poly if start_poly is not None else mac(path.start)
    if p.nvars != path.nvars:
        raise NvarsMismatch("start polynomial and path disagree on N")
    for v, step in elementary_steps(path):
        p = walk(p, v, step)
    return p


def _cache_file(v: Composition) -> Optional[FsPath]:
    if _CACHE_DIR is None:
        return None
    name = "_".join(str(p) for p in v)
    return _CACHE_DIR / f"v{_CACHE_VERSION}" / f"n{len(v)}" / f"{name}.json"


def set_cache_dir(path: Optional[str]) -> None:
    """Enable (or disable with None) the on-disk memo cache."""
    global _CACHE_DIR
    _CACHE_DIR = FsPath(path) if path else None


def clear_memo() -> None:
    _MAC_MEMO.clear()


def _disk_load(v: Composition) -> Optional[MacPoly]:
    target = _cache_file(v)
    if target is None or not target.exists():
        return None
    try:
        return mac_from_json(json.loads(target.read_text(encoding="utf-8")))
    except (OSError, ValueError) as exc:
        logger.warning("ignoring unreadable cache entry %s: %s", target, exc)
        return None


def _disk_store(v: Composition, p: MacPoly) -> None:
    target = _cache_file(v)
    if target is None:
        return
    try:
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(json.dumps(mac_to_json(p)), encoding="utf-8")
    except OSError as exc:
        logger.warning("could not write cache entry %s: %s", target, exc)


def _lookup(v: Composition) -> Optional[MacPoly]:
    found = _MAC_MEMO.get(v)
    if found is None:
        found = _disk_load(v)
        if found is not None:
            found = _MAC_MEMO.setdefault(v, found)
    return found


def mac(v: Sequence[int]) -> MacPoly:
    """The nonsymmetric Macdonald polynomial M_v (memoized by v)."""
    v = make_composition(v)
    found = _lookup(v)
    if found is not None:
        return found

    path = canonical_path(v)
    vertices = [path.start]
    for step in path.steps:
        vertices.append(step_apply(vertices[-1], step))

    start = 0
    p = MacPoly.one(len(v))
    for idx in range(len(vertices) - 1, 0, -1):
        cached = _lookup(vertices[idx])
        if cached is not None:
            start, p = idx, cached
            break

    for idx in range(start, len(path.steps)):
        p = walk(p, vertices[idx], path.steps[idx])
        w = vertices[idx + 1]
        p = _MAC_MEMO.setdefault(w, p)
        _disk_store(w, p)
    logger.debug("computed M_%s (%d terms)", render_composition(v), len(p))
    return p


def leading_coefficient(v: Sequence[int]) -> QtFraction:
    """q^{-½ Σ v_i (v_i - 1)}."""
    return qt_monomial(-sum(p * (p - 1) for p in v) // 2, 0)


def leading_data(v: Sequence[int]) -> Tuple[Composition, QtFraction]:
    """The ⊳-maximal monomial of M_v and its coefficient.

    Raises
    ------
    ReplayMismatch
        If some other monomial is not strictly ⊳-below x^v.
    """
    v = make_composition(v)
    p = mac(v)
    for exps in p.terms:
        if exps != v and cmp_triangle(exps, v) != "lt":
            raise ReplayMismatch(f"monomial {exps} of M_{render_composition(v)} is not below x^v")
    return v, p.coefficient(v)


# ── Orders ─────────────────────────────────────────────────────────────────────

def cmp_dominance(u: Sequence[int], v: Sequence[int]) -> Optional[str]:
    """Compare partial sums: "gt", "lt", "eq" or None when incomparable."""
    if len(u) != len(v):
        raise NvarsMismatch(f"length {len(u)} vs {len(v)}")
    ge = le = True
    su = sv = 0
    for x, y in zip(u, v):
        su += x
        sv += y
        ge &= su >= sv
        le &= su <= sv
    if ge and le:
        return "eq"
    if ge:
        return "gt"
    if le:
        return "lt"
    return None


def cmp_triangle(u: Sequence[int], v: Sequence[int]) -> Optional[str]:
    """u ⊳ v iff u⁺ > v⁺ in dominance, or u⁺ = v⁺ and u > v in dominance."""
    if len(u) != len(v):
        raise NvarsMismatch(f"length {len(u)} vs {len(v)}")
    if tuple(u) == tuple(v):
        return "eq"
    up, vp = partition(u), partition(v)
    if up == vp:
        return cmp_dominance(u, v)
    return cmp_dominance(up, vp)


# ── Eigen checks ───────────────────────────────────────────────────────────────

def has_spectrum(p: MacPoly, spectrum: SpectralVector) -> bool:
    """p·Ŷ_i == spectrum[i]·p for every i."""
    return all(
        apply_Yhat(p, i) == p * entry_value(entry)
        for i, entry in enumerate(spectrum, start=1)
    )


def eigen_holds(v: Sequence[int]) -> bool:
    """M_v·Ŷ_i = ζ̂_v[i]·M_v for all i."""
    v = make_composition(v)
    return has_spectrum(mac(v), spectre_hat(v))


def yang_swaps_spectrum(v: Sequence[int], i: int) -> bool:
    """For v_i < v_{i+1}, M_v·Yang(α, i) carries the spectrum ζ̂_v·s_i."""
    v = make_composition(v)
    p = walk(mac(v), v, Swap(i))
    return has_spectrum(p, si_step(spectre_hat(v), i))
