"""Denominators Den(v), path certificates and their combinators.

Every algorithm takes a path u -> v and returns a FactoredQt that the
numerator of Den(v)/Den(u) divides. Divisibility is checked on binomial
parts; q-powers are compared on their own.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

from models.composition import Composition, make_composition, render_composition
from models.path import JumpSegment, Path, Phi
from services.errors import EndpointMismatch, NotProductForm, RangeError
from services.jumps import block_divisor_bound, jump_spec
from services.polyarith import (
    FactoredQt,
    FactorKey,
    QtPoly,
    factor_qt,
    factored_gcd,
    monomial_content,
    qt_divides,
    qt_fraction,
    qt_lcm,
)
from services.spectral import entry_ratio, spectre_hat
from services.ybgraph import elementary_steps, mac, path_to_json, path_vertices, replay

logger = logging.getLogger(__name__)

A_RULES = ("printed", "max_part")
ALGOS = ("triv", "jump", "opt")


@dataclass(frozen=True)
class DenCertificate:
    """A path together with a bound divisible by num(Den_end / Den_start)."""

    path: Path
    bound: FactoredQt
    algo: str

    @property
    def start(self) -> Composition:
        return self.path.start

    @property
    def end(self) -> Composition:
        return replay(self.path)

    def to_json(self) -> dict:
        data = path_to_json(self.path)
        return {"path": data["steps"], "start": data["start"], "algo": self.algo, "bound": self.bound.to_json()}


# ── Brute force ────────────────────────────────────────────────────────────────

def den_poly(v: Sequence[int]) -> QtPoly:
    """lcm of the reduced coefficient denominators of M_v."""
    p = mac(v)
    den = qt_lcm(c.denom for c in p.terms.values())
    return -den if den.LC < 0 else den


def den_of(v: Sequence[int]) -> FactoredQt:
    """Den(v) in factored form with a positive unit."""
    v = make_composition(v)
    try:
        factored = factor_qt(den_poly(v))
    except NotProductForm:
        logger.warning("Den(%s) is not in product form", render_composition(v))
        raise
    if factored.unit < 0:
        factored = FactoredQt(-factored.unit, factored.qexp, factored.texp, factored.factors)
    return factored


def ratio_numerator(u: Sequence[int], v: Sequence[int]) -> QtPoly:
    """Numerator of the reduced quotient Den(v)/Den(u)."""
    return qt_fraction(den_poly(v), den_poly(u)).numer


def ratio_factored(u: Sequence[int], v: Sequence[int]) -> Tuple[FactoredQt, FactoredQt]:
    """Factored (numerator, denominator) of Den(v)/Den(u)."""
    quotient = qt_fraction(den_poly(v), den_poly(u))
    return factor_qt(quotient.numer), factor_qt(quotient.denom)


# ── Path algorithms ────────────────────────────────────────────────────────────

def _aff_qpower(u: Composition, v: Composition, a_rule: str) -> int:
    if a_rule == "printed":
        return sum((x - y) * (x - y - 1) for x, y in zip(v, u)) // 2
    if a_rule == "max_part":
        return max(v)
    raise RangeError(f"unknown A-rule {a_rule!r}; expected one of {', '.join(A_RULES)}")


def _triv_factors(path: Path, a_rule: str) -> Tuple[Dict[FactorKey, int], int]:
    factors: Dict[FactorKey, int] = {}
    qexp = 0
    for w, step in elementary_steps(path):
        if isinstance(step, Phi):
            qexp += _aff_qpower(path.start, w, a_rule)
            continue
        key = entry_ratio(spectre_hat(w), step.i)
        factors[key] = factors.get(key, 0) + 1
    return factors, qexp


def algo_triv(path: Path, a_rule: str = "printed") -> FactoredQt:
    """One (1 - α) per Yang step, a q-power per affine step."""
    factors, qexp = _triv_factors(path, a_rule)
    return FactoredQt.build(factors, qexp=qexp)


def algo_jump(path: Path, a_rule: str = "printed") -> FactoredQt:
    """Block bounds on declared jump segments, the triv rule on every other step."""
    bound = FactoredQt.one()
    vertices = path_vertices(path)
    for w, step in zip(vertices, path.steps):
        if isinstance(step, JumpSegment):
            bound = bound * block_divisor_bound(jump_spec(w, step.pos, step.k, step.ell))
        else:
            bound = bound * algo_triv(Path.of(w, [step]), a_rule)
    return bound


def algo_opt(path: Path) -> FactoredQt:
    """The exact numerator of Den(end)/Den(start), by brute force."""
    return factor_qt(ratio_numerator(path.start, replay(path))).without_unit()


def certificate(path: Path, algo: str = "triv", a_rule: str = "printed") -> DenCertificate:
    if algo == "triv":
        bound = algo_triv(path, a_rule)
    elif algo == "jump":
        bound = algo_jump(path, a_rule)
    elif algo == "opt":
        bound = algo_opt(path)
    else:
        raise RangeError(f"unknown algorithm {algo!r}; expected one of {', '.join(ALGOS)}")
    logger.debug("%s(%s) = %s", algo, path, bound)
    return DenCertificate(path, bound, algo)


def conjunction(c1: DenCertificate, c2: DenCertificate) -> DenCertificate:
    """u -> v -> w: the concatenated path bounded by the product."""
    if c1.end != c2.start:
        raise EndpointMismatch(
            f"first certificate ends at {render_composition(c1.end)}, second starts at {render_composition(c2.start)}"
        )
    algo = c1.algo if c1.algo == c2.algo else f"{c1.algo}*{c2.algo}"
    return DenCertificate(c1.path.extended(c2.path.steps), c1.bound * c2.bound, algo)


def disjunction(c1: DenCertificate, c2: DenCertificate) -> DenCertificate:
    """Two routes u -> v: bounded by the gcd of both bounds."""
    if c1.start != c2.start or c1.end != c2.end:
        raise EndpointMismatch("disjunction needs certificates with identical endpoints")
    if c1.bound == c2.bound:
        return c1
    algo = c1.algo if c1.algo == c2.algo else f"gcd({c1.algo},{c2.algo})"
    return DenCertificate(c1.path, factored_gcd(c1.bound, c2.bound), algo)


# ── Soundness checks ───────────────────────────────────────────────────────────

def bound_divides(num: QtPoly, bound: FactoredQt) -> bool:
    """Binomial part of ``num`` divides the binomial part of ``bound``."""
    return qt_divides(num, bound.binomial_poly())


def certificate_sound(cert: DenCertificate) -> bool:
    num = ratio_numerator(cert.start, cert.end)
    sound = bound_divides(num, cert.bound)
    if not sound:
        logger.warning("certificate %s for %s does not cover %s", cert.algo, cert.path, num)
    return sound


def triv_qpower_report(path: Path) -> dict:
    """q-power of num(Den_end/Den_start) against both affine-step rules."""
    end = replay(path)
    brute = monomial_content(ratio_numerator(path.start, end))[0]
    report = {
        "start": list(path.start),
        "end": list(end),
        "brute": brute,
    }
    for a_rule in A_RULES:
        exponent = _triv_factors(path, a_rule)[1]
        report[a_rule] = exponent
        report[f"{a_rule}_ok"] = exponent >= brute
    if not report["printed_ok"]:
        logger.warning(
            "printed A-rule gives q^%d below the brute-force q^%d on %s", report["printed"], brute, path
        )
    return report


def degeneracy_points(v: Sequence[int]) -> List[FactorKey]:
    """Every (a, b), a, b >= 1, such that some factor of Den(v) vanishes at q^a t^b = 1."""
    points = set()
    for fa, fb in den_of(v).factor_keys:
        if fa < 1 or fb < 1:
            continue
        for r in range(1, min(fa, fb) + 1):
            if fa % r == 0 and fb % r == 0:
                points.add((fa // r, fb // r))
    return sorted(points)
