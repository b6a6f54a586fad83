"""Staircases, quasi-staircases and the climb that never meets 1 - q^a t^{k+1}.

    staircase(k, a, n) = ((n-1)a)^k ··· a^k 0^k
    qsc(k, a, n, m, b) = ((m-1)a+b)^k ··· b^k 0^{k(n-m)}

raise:    qsc(m, b) -Φ^{mk}->     V_0 -jump-> V_1 ··· -jump-> V_m = qsc(m, b+1)
add_step: qsc(m, a) -Φ^{(m+1)k}-> W_0 -jump-> W_1 ··· -jump-> W_{m+1} = qsc(m+1, 1)
up:       add_step followed by raise for b = 1..a-1
"""

from __future__ import annotations

import logging
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Tuple

from models.composition import Composition, render_composition
from models.path import JumpSegment, Path, Phi, Step
from models.staircase_params import StaircaseParams
from services import settings
from services.denom import DenCertificate, algo_jump, bound_divides, den_of, ratio_numerator
from services.errors import NotProductForm, RangeError, ReplayMismatch
from services.jumps import block_divisor_bound, jump_spec
from services.polyarith import FactoredQt, FactorKey, divides_spec
from services.spectral import spectre_hat
from services.ybgraph import path_vertices, replay

logger = logging.getLogger(__name__)

Cell = Tuple[int, int, int]


# ── Builders ───────────────────────────────────────────────────────────────────

def qsc(k: int, a: int, n: int, m: int, b: int) -> Composition:
    params = StaircaseParams(k, a, n, m, b)
    parts: List[int] = []
    for j in range(params.m - 1, -1, -1):
        parts.extend([j * a + b] * k)
    parts.extend([0] * (k * (n - m)))
    return tuple(parts)


def staircase(k: int, a: int, n: int) -> Composition:
    """((n-1)a)^k ··· a^k 0^k."""
    return qsc(k, a, n, n - 1, a)


# ── Paths ──────────────────────────────────────────────────────────────────────

def _jumps_past_zeros(k: int, blocks: int, zero_len: int) -> List[Step]:
    if zero_len == 0:
        return []
    return [JumpSegment(j * k + 1, zero_len, k) for j in range(blocks)]


def _checked(path: Path, target: Composition, what: str) -> Path:
    end = replay(path)
    if end != target:
        raise ReplayMismatch(f"{what} lands on {render_composition(end)}, expected {render_composition(target)}")
    return path


def raise_path(k: int, a: int, n: int, m: int, b: int) -> Path:
    """qsc(m, b) -> qsc(m, b+1)."""
    StaircaseParams(k, a, n, m, b)
    if b >= a:
        raise RangeError(f"raise needs b < a, got b={b}, a={a}")
    steps: List[Step] = [Phi()] * (m * k)
    steps += _jumps_past_zeros(k, m, k * (n - m))
    path = Path.of(qsc(k, a, n, m, b), steps)
    return _checked(path, qsc(k, a, n, m, b + 1), f"raise({k},{a},{n};{m},{b})")


def add_step_path(k: int, a: int, n: int, m: int) -> Path:
    """qsc(m, a) -> qsc(m+1, 1)."""
    StaircaseParams(k, a, n, m, a)
    if m >= n:
        raise RangeError(f"add_step needs m < n, got m={m}, n={n}")
    steps: List[Step] = [Phi()] * ((m + 1) * k)
    steps += _jumps_past_zeros(k, m + 1, k * (n - m - 1))
    path = Path.of(qsc(k, a, n, m, a), steps)
    return _checked(path, qsc(k, a, n, m + 1, 1), f"add_step({k},{a},{n};{m})")


def up_path(k: int, a: int, n: int, m: int) -> Path:
    """qsc(m, a) -> qsc(m+1, a)."""
    path = add_step_path(k, a, n, m)
    for b in range(1, a):
        path = path.extended(raise_path(k, a, n, m + 1, b).steps)
    return _checked(path, qsc(k, a, n, m + 1, a), f"up({k},{a},{n};{m})")


def climb_segments(k: int, a: int, n: int) -> Iterator[Tuple[str, Path]]:
    """Every add_step / raise segment from 0^{nk} to staircase(k, a, n), in order."""
    for m in range(n - 1):
        yield f"add_step(m={m})", add_step_path(k, a, n, m)
        for b in range(1, a):
            yield f"raise(m={m + 1},b={b})", raise_path(k, a, n, m + 1, b)


def staircase_path(k: int, a: int, n: int) -> Path:
    path = Path.of(qsc(k, a, n, 0, a))
    for _, segment in climb_segments(k, a, n):
        path = path.extended(segment.steps)
    return _checked(path, staircase(k, a, n), f"staircase({k},{a},{n})")


# ── Segment bounds ─────────────────────────────────────────────────────────────

def _closed_form(gap: int, lower_blocks: int, k: int) -> FactoredQt:
    """prod_{i=1..k} (1 - q^gap t^{lower_blocks*k + i})."""
    return FactoredQt.build([((gap, lower_blocks * k + i), 1) for i in range(1, k + 1)])


def _jump_rows(path: Path, closed: List[FactoredQt]) -> List[dict]:
    rows = []
    jumps = [(w, step) for w, step in zip(path_vertices(path), path.steps) if isinstance(step, JumpSegment)]
    for (w, step), expected in zip(jumps, closed):
        bound = block_divisor_bound(jump_spec(w, step.pos, step.k, step.ell))
        rows.append(
            {
                "segment": step.label,
                "from": render_composition(w),
                "bound": bound,
                "closed_form": expected,
                "agree": bound == expected,
            }
        )
    return rows


def segment_bounds(k: int, a: int, n: int, m: int, b: Optional[int] = None) -> List[dict]:
    """Per-jump bounds of raise (b given) or add_step (b None), with their closed forms.

    raise:    D_j = prod_i (1 - q^{(m-j)a+b+1} t^{(m-j)k+i}),  j = 1..m
    add_step: E_j = prod_i (1 - q^{(m-j)a+1} t^{(m-j)k+i}),    j = 0..m
    """
    if b is None:
        path = add_step_path(k, a, n, m)
        closed = [_closed_form((m - j) * a + 1, m - j, k) for j in range(m + 1)]
    else:
        path = raise_path(k, a, n, m, b)
        closed = [_closed_form((m - j) * a + b + 1, m - j, k) for j in range(1, m + 1)]
    return _jump_rows(path, closed)


def spectral_anchor_holds(k: int, a: int, n: int, m: int, b: int) -> bool:
    """ζ̂_{V_{j-1}}[(j-1)k+1] = t^{(n-m)k-1} along raise(m, b)."""
    path = raise_path(k, a, n, m, b)
    if m == n:
        return True
    vertices = path_vertices(path)[m * k:]
    expected = (0, (n - m) * k - 1)
    for j in range(1, m + 1):
        if spectre_hat(vertices[j - 1])[(j - 1) * k] != expected:
            return False
    return True


def _hits(target: FactorKey, bound: FactoredQt) -> List[FactorKey]:
    return [key for key in bound.factor_keys if divides_spec(target, key)]


# ── Verification ───────────────────────────────────────────────────────────────

def verify_unreachable_pole(k: int, a: int, n: int, check_segments: bool = False) -> dict:
    """Brute-force and certificate witnesses that 1 - q^a t^{k+1} is absent from Den(staircase).

    ``check_segments`` additionally checks every jump bound against the exact
    numerator of its segment (one brute-force Den per vertex).
    """
    params = StaircaseParams(k, a, n)
    target = params.target_factor
    v = staircase(k, a, n)

    den = den_of(v)
    brute_hits = _hits(target, den)

    certificates: List[dict] = []
    cert_hits: List[FactorKey] = []
    disagreements = 0
    for name, segment in climb_segments(k, a, n):
        bound = algo_jump(segment)
        hits = _hits(target, bound)
        cert_hits.extend(hits)
        entry = {"segment": name, "start": list(segment.start), "end": list(replay(segment))}
        entry.update(DenCertificate(segment, bound, "jump").to_json())
        entry["hits_target"] = bool(hits)
        if check_segments:
            entry["sound"] = bound_divides(ratio_numerator(segment.start, entry["end"]), bound)
            disagreements += not entry["sound"]
        certificates.append(entry)

    absent = not brute_hits
    certificate_absent = not cert_hits
    if absent != certificate_absent or disagreements:
        logger.warning(
            "staircase(%d,%d,%d): brute force absent=%s, certificates absent=%s, unsound segments=%d",
            k, a, n, absent, certificate_absent, disagreements,
        )
    report: Dict[str, object] = {
        "k": k,
        "a": a,
        "n": n,
        "staircase": list(v),
        "den": den.to_json(),
        "den_text": den.render(),
        "target_factor": list(target),
        "absent": absent,
        "certificate_absent": certificate_absent,
        "consistent": absent == certificate_absent and not disagreements,
        "certificates": certificates,
    }
    logger.debug("staircase(%d,%d,%d) verified: absent=%s", k, a, n, absent)
    return report


def grid_cells(
    max_nk: Optional[int] = None,
    max_a: Optional[int] = None,
    min_n: Optional[int] = None,
    max_size: Optional[int] = None,
) -> List[Cell]:
    """(k, a, n) cells with n*k <= max_nk, a <= max_a, n >= min_n and |staircase| <= max_size."""
    conf = settings.section("grid")
    max_nk = max_nk if max_nk is not None else int(conf.get("max_nk", 6))
    max_a = max_a if max_a is not None else int(conf.get("max_a", 2))
    min_n = max(2, min_n if min_n is not None else int(conf.get("min_n", 2)))
    max_size = max_size if max_size is not None else int(conf.get("max_size", 8))
    cells: List[Cell] = []
    for n in range(min_n, max_nk + 1):
        for k in range(1, max_nk // n + 1):
            for a in range(1, max_a + 1):
                if k * a * n * (n - 1) // 2 <= max_size:
                    cells.append((k, a, n))
    return sorted(cells, key=lambda cell: (cell[0] * cell[1] * cell[2] * (cell[2] - 1), cell))


def verify_grid(
    cells: Sequence[Cell],
    progress: Optional[Callable[[str], None]] = None,
    should_stop: Optional[Callable[[], bool]] = None,
    check_segments: Optional[bool] = None,
) -> List[dict]:
    """verify_unreachable_pole over ``cells``; a failing cell becomes an error report.

    ``check_segments`` defaults to the ``grid.check_segments`` setting.
    """
    if check_segments is None:
        check_segments = bool(settings.section("grid").get("check_segments", False))
    reports: List[dict] = []
    for k, a, n in cells:
        if should_stop is not None and should_stop():
            logger.info("grid stopped after %d of %d cells", len(reports), len(cells))
            break
        if progress is not None:
            progress(f"staircase({k},{a},{n})")
        try:
            report = verify_unreachable_pole(k, a, n, check_segments=check_segments)
        except NotProductForm as exc:
            report = {"k": k, "a": a, "n": n, "absent": False, "consistent": False, "error": str(exc)}
        reports.append(report)
    return reports
