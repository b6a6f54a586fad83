"""Right-acting operator kernels on MacPoly and the relation catalog.

Every operator acts on the right: ``apply_Ti(p, i)`` is p·T_i, and an operator
word A B C applied to p means ((p·A)·B)·C.

    p·T_i   = (p·∂_i)·(t x_{i+1} - x_i) + t·p
    p·τ     = p(x_N/q, x_1, ..., x_{N-1})
    p·A     = (p·τ)·x_N
    p·Y_i   = p·T_i···T_{N-1} τ⁻¹ T_1⁻¹···T_{i-1}⁻¹,   τ⁻¹: p ↦ p(x_2, ..., x_N, q x_1)
    p·Ŷ_i   = t^{i-1} p·Y_i
"""

from __future__ import annotations

import logging
import random
from functools import lru_cache
from typing import Callable, Dict, List, Optional, Tuple

from services.errors import AlphaIsOne, IndexOutOfRange, RangeError
from services.polyarith import (
    QT_FIELD,
    QT_RING,
    Q,
    T,
    Exponents,
    MacPoly,
    QtFraction,
    QtPoly,
    qt_monomial,
    x_ring,
)

logger = logging.getLogger(__name__)

_TINV_SHIFT = QT_FIELD.one - T      # (1 - t) in T⁻¹ = (T + (1 - t)) / t
_T_INV = QT_FIELD.one / T

RELATION_IDS: Tuple[str, ...] = (
    "quad",
    "braid",
    "com",
    "blr",
    "dual-blr",
    "cross",
    "dcross",
    "dbl-hat",
    "tau-t",
    "tau-x",
    "tau-y",
    "y-com",
    "hetcomm",
    "x-tau-inv",
)


# ── Operator tags ──────────────────────────────────────────────────────────────

def _check_swap_index(p: MacPoly, i: int) -> None:
    if not 1 <= i <= p.nvars - 1:
        raise IndexOutOfRange(f"index {i} outside 1..{p.nvars - 1}")


def _check_var_index(p: MacPoly, i: int) -> None:
    if not 1 <= i <= p.nvars:
        raise IndexOutOfRange(f"index {i} outside 1..{p.nvars}")


# ── Elementary kernels ─────────────────────────────────────────────────────────

def _rebuild(p: MacPoly, terms: Dict[Exponents, QtFraction]) -> MacPoly:
    return MacPoly(x_ring(p.nvars).from_dict(terms))


def apply_si(p: MacPoly, i: int) -> MacPoly:
    """Swap x_i and x_{i+1}."""
    _check_swap_index(p, i)
    k = i - 1
    swapped = {}
    for exps, coeff in p.poly.items():
        e = list(exps)
        e[k], e[k + 1] = e[k + 1], e[k]
        swapped[tuple(e)] = coeff
    return _rebuild(p, swapped)


def apply_del(p: MacPoly, i: int) -> MacPoly:
    """Divided difference (p - p·s_i)/(x_i - x_{i+1}), computed monomial by monomial.

    x_i^a x_{i+1}^b ∂_i = (x_i x_{i+1})^b · h_{a-b-1}(x_i, x_{i+1})  for a > b,
    its negative with a, b exchanged for a < b, and 0 for a == b.
    """
    _check_swap_index(p, i)
    k = i - 1
    acc: Dict[Exponents, QtFraction] = {}
    for exps, coeff in p.poly.items():
        a, b = exps[k], exps[k + 1]
        if a == b:
            continue
        sign = 1 if a > b else -1
        low, span = min(a, b), abs(a - b)
        c = coeff if sign > 0 else -coeff
        base = list(exps)
        for j in range(span):
            base[k] = low + span - 1 - j
            base[k + 1] = low + j
            key = tuple(base)
            total = acc.get(key)
            acc[key] = c if total is None else total + c
    return _rebuild(p, {e: c for e, c in acc.items() if c})


def apply_pi(p: MacPoly, i: int) -> MacPoly:
    """Isobaric divided difference π_i = X_i ∂_i (multiply first, then divide)."""
    return apply_del(p * MacPoly.variable(p.nvars, i), i)


@lru_cache(maxsize=None)
def _ti_pair(a: int, b: int) -> Tuple[Tuple[Tuple[int, int], QtPoly], ...]:
    """x_i^a x_{i+1}^b · T_i as ((a', b'), ZZ[t]-coefficient) pairs."""
    t = QT_RING.gens[1]
    acc: Dict[Tuple[int, int], QtPoly] = {(a, b): t}
    if a != b:
        sign = 1 if a > b else -1
        low, span = min(a, b), abs(a - b)
        for j in range(span):
            c, d = low + span - 1 - j, low + j
            acc[(c, d + 1)] = acc.get((c, d + 1), QT_RING.zero) + sign * t
            acc[(c + 1, d)] = acc.get((c + 1, d), QT_RING.zero) - sign
    return tuple(sorted((key, poly) for key, poly in acc.items() if poly))


def _ti_shifted(p: MacPoly, i: int, shift: Optional[QtFraction] = None) -> MacPoly:
    """p·(T_i + shift).

    Contributions to one output monomial are summed per input denominator, so
    each output coefficient is cancelled once instead of once per addition.
    """
    _check_swap_index(p, i)
    k = i - 1
    if shift is None:
        s_num, s_den = QT_RING.zero, QT_RING.one
    else:
        shift = QT_FIELD(shift)
        s_num, s_den = shift.numer, shift.denom
    buckets: Dict[Exponents, Dict[QtPoly, QtPoly]] = {}
    for exps, coeff in p.poly.items():
        num, den = coeff.numer, coeff.denom
        key_den = den * s_den
        for (c, d), poly in _ti_pair(exps[k], exps[k + 1]):
            e = exps[:k] + (c, d) + exps[k + 2:]
            bucket = buckets.setdefault(e, {})
            bucket[key_den] = bucket.get(key_den, QT_RING.zero) + num * poly * s_den
        if s_num:
            bucket = buckets.setdefault(exps, {})
            bucket[key_den] = bucket.get(key_den, QT_RING.zero) + num * s_num
    terms: Dict[Exponents, QtFraction] = {}
    for e, bucket in buckets.items():
        total = QT_FIELD.zero
        for den, num in bucket.items():
            if num:
                total += QT_FIELD.new(num, den)
        if total:
            terms[e] = total
    return _rebuild(p, terms)


def apply_Ti(p: MacPoly, i: int) -> MacPoly:
    """Demazure–Lusztig operator T_i = ∂_i (t X_{i+1} - X_i) + t."""
    return _ti_shifted(p, i)


def apply_Ti_inv(p: MacPoly, i: int) -> MacPoly:
    """T_i⁻¹ = (T_i + (1 - t)) / t."""
    return MacPoly(_ti_shifted(p, i, _TINV_SHIFT).poly.mul_ground(_T_INV))


def apply_tau(p: MacPoly) -> MacPoly:
    """p(x_N/q, x_1, ..., x_{N-1}): exponents rotate left, coefficient gains q^{-e_1}."""
    rotated = {}
    for exps, coeff in p.poly.items():
        e1 = exps[0]
        rotated[exps[1:] + (e1,)] = coeff * qt_monomial(-e1, 0) if e1 else coeff
    return _rebuild(p, rotated)


def apply_tau_inv(p: MacPoly) -> MacPoly:
    """p(x_2, ..., x_N, q x_1): exponents rotate right, coefficient gains q^{e_N}."""
    rotated = {}
    for exps, coeff in p.poly.items():
        en = exps[-1]
        rotated[(en,) + exps[:-1]] = coeff * qt_monomial(en, 0) if en else coeff
    return _rebuild(p, rotated)


def apply_xi(p: MacPoly, i: int) -> MacPoly:
    """Multiplication operator X_i."""
    _check_var_index(p, i)
    return p * MacPoly.variable(p.nvars, i)


def apply_aff(p: MacPoly) -> MacPoly:
    """A = τ followed by multiplication by x_N."""
    return apply_xi(apply_tau(p), p.nvars)


def yang_shift(alpha: QtFraction) -> QtFraction:
    """(1 - t)/(1 - α), the scalar part of the Yang operator."""
    alpha = QT_FIELD(alpha)
    if alpha == QT_FIELD.one:
        raise AlphaIsOne("Yang operator with alpha = 1")
    return (QT_FIELD.one - T) / (QT_FIELD.one - alpha)


def apply_yang(p: MacPoly, i: int, alpha: QtFraction) -> MacPoly:
    """Yang(α, i) = T_i + (1 - t)/(1 - α)."""
    return _ti_shifted(p, i, yang_shift(alpha))


def apply_Y(p: MacPoly, i: int) -> MacPoly:
    """Cherednik–Dunkl operator Y_i = T_i···T_{N-1} τ⁻¹ T_1⁻¹···T_{i-1}⁻¹."""
    _check_var_index(p, i)
    n = p.nvars
    for j in range(i, n):
        p = apply_Ti(p, j)
    p = apply_tau_inv(p)
    for j in range(1, i):
        p = apply_Ti_inv(p, j)
    return p


def apply_Yhat(p: MacPoly, i: int) -> MacPoly:
    """Ŷ_i = t^{i-1} Y_i."""
    return apply_Y(p, i) * qt_monomial(0, i - 1)


def apply_Y_product(p: MacPoly) -> MacPoly:
    """Y_1 Y_2 ··· Y_N applied in that order."""
    for i in range(1, p.nvars + 1):
        p = apply_Y(p, i)
    return p


def apply_e(p: MacPoly) -> MacPoly:
    """Multiplication by x_1 x_2 ··· x_N."""
    return MacPoly(p.poly * x_ring(p.nvars).from_dict({(1,) * p.nvars: 1}))


# ── Random test polynomials ────────────────────────────────────────────────────

_COEFF_POOL: Tuple[QtFraction, ...] = (
    QT_FIELD.one,
    -QT_FIELD.one,
    QT_FIELD(2),
    Q,
    T,
    Q - T,
    QT_FIELD.one / (QT_FIELD.one - Q * T),
    T / Q,
)


def random_macpoly(nvars: int, degree: int, rng: random.Random, max_terms: int = 4) -> MacPoly:
    """Small random polynomial with (q,t)-coefficients drawn from a fixed pool."""
    if nvars < 1 or degree < 0:
        raise RangeError("nvars >= 1 and degree >= 0 required")
    terms: Dict[Exponents, QtFraction] = {}
    for _ in range(rng.randint(1, max_terms)):
        total = rng.randint(0, degree)
        exps = [0] * nvars
        for _ in range(total):
            exps[rng.randrange(nvars)] += 1
        key = tuple(exps)
        terms[key] = terms.get(key, QT_FIELD.zero) + rng.choice(_COEFF_POOL)
    return MacPoly.from_terms(nvars, {e: c for e, c in terms.items() if c})


# ── Relation catalog ───────────────────────────────────────────────────────────

Check = Callable[[MacPoly], bool]


def _all_swap(p: MacPoly, rel: Callable[[MacPoly, int], bool]) -> bool:
    return all(rel(p, i) for i in range(1, p.nvars))


def _rel_quad(p: MacPoly, i: int) -> bool:
    first = apply_Ti(p, i) - p * T
    return (apply_Ti(first, i) + first).is_zero()


def _rel_braid(p: MacPoly, i: int) -> bool:
    if i + 1 > p.nvars - 1:
        return True
    left = apply_Ti(apply_Ti(apply_Ti(p, i), i + 1), i)
    right = apply_Ti(apply_Ti(apply_Ti(p, i + 1), i), i + 1)
    return left == right


def _rel_com(p: MacPoly) -> bool:
    n = p.nvars
    for i in range(1, n):
        for j in range(i + 2, n):
            if apply_Ti(apply_Ti(p, i), j) != apply_Ti(apply_Ti(p, j), i):
                return False
    return True


def _rel_blr(p: MacPoly, i: int) -> bool:
    left = apply_Ti(apply_xi(apply_Ti(p, i), i + 1), i)
    return left == apply_xi(p, i) * T


def _rel_dual_blr(p: MacPoly, i: int) -> bool:
    left = apply_Ti(apply_Y(apply_Ti(p, i), i + 1), i)
    return left == apply_Y(p, i)


def _rel_dbl_hat(p: MacPoly, i: int) -> bool:
    left = apply_Ti(apply_Yhat(apply_Ti(p, i), i + 1), i)
    return left == apply_Yhat(p, i) * T


def _rel_cross(p: MacPoly) -> bool:
    return all(
        apply_Y(apply_e(p), i) == apply_e(apply_Y(p, i)) * Q
        for i in range(1, p.nvars + 1)
    )


def _rel_dcross(p: MacPoly) -> bool:
    prod = apply_Y_product(p)
    return all(
        apply_Y_product(apply_xi(p, i)) == apply_xi(prod, i) * Q
        for i in range(1, p.nvars + 1)
    )


def _rel_tau_t(p: MacPoly) -> bool:
    return all(
        apply_tau(apply_Ti(p, i + 1)) == apply_Ti(apply_tau(p), i)
        for i in range(1, p.nvars - 1)
    )


def _rel_tau_x(p: MacPoly) -> bool:
    n = p.nvars
    tau_p = apply_tau(p)
    for i in range(2, n + 1):
        if apply_tau(apply_xi(p, i)) != apply_xi(tau_p, i - 1):
            return False
    return apply_tau(apply_xi(p, 1)) == apply_xi(tau_p, n) * qt_monomial(-1, 0)


def _rel_tau_y(p: MacPoly) -> bool:
    n = p.nvars
    aff_p = apply_aff(p)
    for i in range(1, n):
        if apply_Yhat(aff_p, i) != apply_aff(apply_Yhat(p, i + 1)):
            return False
    return apply_Yhat(aff_p, n) == apply_aff(apply_Yhat(p, 1)) * Q


def _rel_y_com(p: MacPoly) -> bool:
    n = p.nvars
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            if apply_Y(apply_Y(p, i), j) != apply_Y(apply_Y(p, j), i):
                return False
    return True


def _rel_hetcomm(p: MacPoly) -> bool:
    """T_i commutes with X_j and Y_j whenever |i - j| > 1."""
    n = p.nvars
    for i in range(1, n):
        ti_p = apply_Ti(p, i)
        for j in range(1, n + 1):
            if abs(i - j) <= 1:
                continue
            if apply_xi(ti_p, j) != apply_Ti(apply_xi(p, j), i):
                return False
            if apply_Y(ti_p, j) != apply_Ti(apply_Y(p, j), i):
                return False
    return True


def _rel_x_tau_inv(p: MacPoly) -> bool:
    return apply_tau_inv(apply_tau(p)) == p and apply_tau(apply_tau_inv(p)) == p


_CATALOG: Dict[str, Check] = {
    "quad": lambda p: _all_swap(p, _rel_quad),
    "braid": lambda p: _all_swap(p, _rel_braid),
    "com": _rel_com,
    "blr": lambda p: _all_swap(p, _rel_blr),
    "dual-blr": lambda p: _all_swap(p, _rel_dual_blr),
    "cross": _rel_cross,
    "dcross": _rel_dcross,
    "dbl-hat": lambda p: _all_swap(p, _rel_dbl_hat),
    "tau-t": _rel_tau_t,
    "tau-x": _rel_tau_x,
    "tau-y": _rel_tau_y,
    "y-com": _rel_y_com,
    "hetcomm": _rel_hetcomm,
    "x-tau-inv": _rel_x_tau_inv,
}


def check_relation(tag: str, p: MacPoly) -> bool:
    """True iff both sides of relation ``tag`` agree on p exactly (all admissible indices)."""
    try:
        check = _CATALOG[tag]
    except KeyError:
        raise RangeError(f"unknown relation id {tag!r}; expected one of {', '.join(RELATION_IDS)}") from None
    return check(p)


def run_relation_suite(
    nvars: int,
    trials: int,
    degree: int,
    seed: int,
    tags: Optional[List[str]] = None,
) -> Dict[str, List[int]]:
    """Check every relation on ``trials`` random polynomials; returns failing trial indices per id."""
    rng = random.Random(seed)
    tags = list(tags or RELATION_IDS)
    failures: Dict[str, List[int]] = {tag: [] for tag in tags}
    for trial in range(trials):
        p = random_macpoly(nvars, degree, rng)
        for tag in tags:
            if not check_relation(tag, p):
                logger.warning("relation %s failed on trial %d: %r", tag, trial, p)
                failures[tag].append(trial)
    logger.debug("relation suite N=%d trials=%d done", nvars, trials)
    return failures


def kernel_matches_symmetry(p: MacPoly, i: int) -> bool:
    """Check p·s_i = p  ⇔  p·(T_i - t) = 0 on one witness."""
    symmetric = apply_si(p, i) == p
    annihilated = (apply_Ti(p, i) - p * T).is_zero()
    return symmetric == annihilated
