"""Specialization at q^a t^b = 1 and factorization-identity checks.

A point (a, b) with d = gcd(a, b) substitutes

    q = ω u^{-b/d},   t = u^{a/d},   ω = ζ_a^k

so q^a t^b = ω^a = 1. Coefficients land in K(u) where K is QQ for a <= 2 and
QQ(ζ_a) otherwise. Numerator and denominator of each reduced (q,t)
coefficient are specialized separately so a vanishing denominator is caught
before any division.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path as FsPath
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

import sympy
from sympy.polys.domains import QQ
from sympy.polys.fields import FracElement, FracField, field
from sympy.polys.orderings import lex
from sympy.polys.rings import PolyElement, PolyRing

from models.composition import Composition, make_composition, parse_composition, render_composition
from models.spec_point import SpecPoint
from services import settings
from services.errors import DegeneratePolynomial, NotProductForm, ParseError
from services.polyarith import FactorKey, QtFraction, QtPoly, compose_terms, divides_spec, factor_qt
from services.denom import den_of
from services.ybgraph import mac

logger = logging.getLogger(__name__)

CycloFraction = FracElement

_POINT_RE = re.compile(
    r"^\s*q(?:\^(?P<a>\d+))?\s*\*?\s*t(?:\^(?P<b>\d+))?\s*=\s*1\s*(?:[,;]?\s*omega\s*=\s*(?P<k>-?\d+))?\s*$"
)
_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z_0-9]*")


# ── Points ─────────────────────────────────────────────────────────────────────

def parse_point(text: str, omega_power: Optional[int] = None) -> SpecPoint:
    """Parse "q^a*t^b=1" with an optional "omega=k"."""
    match = _POINT_RE.match(text)
    if not match:
        raise ParseError(f"not a specialization point: {text!r} (expected q^a*t^b=1 [omega=k])")
    a = int(match.group("a") or 1)
    b = int(match.group("b") or 1)
    if match.group("k") is not None:
        k = int(match.group("k"))
    elif omega_power is not None:
        k = omega_power
    else:
        k = int(settings.section("specialize").get("omega_power", 1))
    return SpecPoint(a, b, k)


@lru_cache(maxsize=None)
def cyclo_field(a: int) -> Tuple[FracField, FracElement]:
    """K(u) with K = QQ(ζ_a) (QQ when a <= 2) and its generator u."""
    if a <= 2:
        domain = QQ
    else:
        domain = QQ.algebraic_field(sympy.exp(2 * sympy.pi * sympy.I / a))
    u_field, u = field("u", domain, lex)
    return u_field, u


@lru_cache(maxsize=None)
def _omega_powers(a: int, omega_exponent: int) -> Tuple[Any, ...]:
    """ω^0, ..., ω^{a-1} as elements of K."""
    domain = cyclo_field(a)[0].domain
    if a <= 2:
        omega = domain.convert(-1 if a == 2 and omega_exponent % 2 else 1)
    else:
        omega = domain.from_sympy(sympy.exp(2 * sympy.pi * sympy.I / a)) ** omega_exponent
    powers = [domain.one]
    for _ in range(a - 1):
        powers.append(powers[-1] * omega)
    return tuple(powers)


def omega_value(point: SpecPoint) -> CycloFraction:
    u_field, _ = cyclo_field(point.a)
    return u_field.ground_new(_omega_powers(point.a, point.omega_exponent)[1 % point.a])


def point_values(point: SpecPoint) -> Tuple[CycloFraction, CycloFraction]:
    """(q, t) under the substitution."""
    _, u = cyclo_field(point.a)
    return omega_value(point) * u**point.q_shift, u**point.t_shift


def evaluate_qt(poly: QtPoly, point: SpecPoint) -> CycloFraction:
    """A ZZ[q,t] polynomial evaluated at ``point`` (collected as a Laurent polynomial in u)."""
    u_field, u = cyclo_field(point.a)
    domain = u_field.domain
    omegas = _omega_powers(point.a, point.omega_exponent)
    collected: Dict[int, Any] = {}
    for (i, j), coeff in poly.items():
        e = point.q_shift * i + point.t_shift * j
        collected[e] = collected.get(e, domain.zero) + domain.convert(int(coeff)) * omegas[i % point.a]
    collected = {e: c for e, c in collected.items() if c}
    if not collected:
        return u_field.zero
    low = min(collected)
    numer = u_field.ring({(e - low,): c for e, c in collected.items()})
    return u_field(numer) * u**low


def evaluate_monomial(point: SpecPoint, a: int, b: int) -> CycloFraction:
    """q^a t^b under the substitution."""
    q_value, t_value = point_values(point)
    return q_value**a * t_value**b


# ── Degeneration ───────────────────────────────────────────────────────────────

def degenerates(v: Sequence[int], a: int, b: int) -> bool:
    """Some factor of Den(v) is 1 - (q^a t^b)^r."""
    return any(divides_spec((a, b), key) for key in den_of(v).factor_keys)


def _offending_factor(den: QtPoly, point: SpecPoint) -> Optional[FactorKey]:
    try:
        keys = factor_qt(den).factor_keys
    except NotProductForm:
        return None
    return next((key for key in keys if divides_spec((point.a, point.b), key)), None)


def specialize_coefficient(c: QtFraction, point: SpecPoint) -> CycloFraction:
    den = evaluate_qt(c.denom, point)
    if not den:
        factor = _offending_factor(c.denom, point)
        raise DegeneratePolynomial(f"denominator vanishes at {point.label}", factor)
    return evaluate_qt(c.numer, point) / den


@dataclass(frozen=True)
class SpecializedPoly:
    """A polynomial in x_1..x_N with coefficients in K(u)."""

    point: SpecPoint
    nvars: int
    terms: Tuple[Tuple[Tuple[int, ...], CycloFraction], ...]

    @classmethod
    def from_terms(cls, point: SpecPoint, nvars: int, terms: Mapping[Tuple[int, ...], CycloFraction]) -> "SpecializedPoly":
        return cls(point, nvars, tuple(sorted((e, c) for e, c in terms.items() if c)))

    @property
    def term_map(self) -> Dict[Tuple[int, ...], CycloFraction]:
        return dict(self.terms)

    def swap(self, i: int) -> "SpecializedPoly":
        """x_i <-> x_{i+1}."""
        swapped = {}
        for exps, coeff in self.terms:
            e = list(exps)
            e[i - 1], e[i] = e[i], e[i - 1]
            swapped[tuple(e)] = coeff
        return SpecializedPoly.from_terms(self.point, self.nvars, swapped)

    def render(self) -> str:
        if not self.terms:
            return "0"
        pieces = []
        for exps, coeff in reversed(self.terms):
            mono = "*".join(f"x{i}" if e == 1 else f"x{i}^{e}" for i, e in enumerate(exps, start=1) if e)
            text = str(coeff.as_expr()).replace("**", "^")
            pieces.append(f"({text})*{mono}" if mono else f"({text})")
        return " + ".join(pieces)

    def to_json(self) -> dict:
        return {
            "nvars": self.nvars,
            "point": self.point.label,
            "omega": self.point.omega_exponent,
            "terms": [{"x": list(exps), "value": str(coeff.as_expr())} for exps, coeff in reversed(self.terms)],
        }


def specialize_mac(v: Sequence[int], point: SpecPoint) -> SpecializedPoly:
    """M_v with every coefficient specialized.

    Raises
    ------
    DegeneratePolynomial
        If a coefficient denominator vanishes at the point.
    """
    v = make_composition(v)
    p = mac(v)
    terms = {exps: specialize_coefficient(c, point) for exps, c in p.terms.items()}
    logger.debug("specialized M_%s at %s (%d terms)", render_composition(v), point.label, len(terms))
    return SpecializedPoly.from_terms(point, p.nvars, terms)


def substitution_degenerates(v: Sequence[int], point: SpecPoint) -> bool:
    """Degeneration detected by substituting, without factoring Den(v)."""
    p = mac(v)
    return any(not evaluate_qt(c.denom, point) for c in p.terms.values())


def specialized_symmetric(v: Sequence[int], point: SpecPoint, i: int) -> bool:
    """Swap invariance of the specialized M_v in x_i, x_{i+1}."""
    spec = specialize_mac(v, point)
    return spec.swap(i) == spec


# ── Identity files ─────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class IdentitySpec:
    """M_vector(subst; point) = rhs."""

    vector: Composition
    point: SpecPoint
    rhs: str
    param: str = "u"
    subst: Tuple[Tuple[str, str], ...] = ()
    name: str = ""


@dataclass(frozen=True)
class IdentityResult:
    name: str
    holds: bool
    reason: str
    lhs_degree: int
    rhs_degrees: Tuple[int, ...]

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "holds": self.holds,
            "reason": self.reason,
            "lhs_degree": self.lhs_degree,
            "rhs_degrees": list(self.rhs_degrees),
        }


def parse_identity(text: str, name: str = "") -> IdentitySpec:
    """Parse the ``key: value`` identity format; indented lines continue the previous key."""
    fields: Dict[str, str] = {}
    last: Optional[str] = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        if line[0].isspace() and last is not None:
            fields[last] += " " + line.strip()
            continue
        key, sep, value = line.partition(":")
        if not sep:
            raise ParseError(f"{name or 'identity'}:{lineno}: expected 'key: value'")
        last = key.strip().lower()
        fields[last] = value.strip()

    missing = [key for key in ("vector", "point", "rhs") if key not in fields]
    if missing:
        raise ParseError(f"{name or 'identity'}: missing {', '.join(missing)}")
    subst: List[Tuple[str, str]] = []
    if fields.get("subst"):
        for item in fields["subst"].split(","):
            var, sep, expr = item.partition("=")
            if not sep:
                raise ParseError(f"{name or 'identity'}: bad substitution {item.strip()!r}")
            subst.append((var.strip(), expr.strip()))
    return IdentitySpec(
        vector=parse_composition(fields["vector"]),
        point=parse_point(fields["point"]),
        rhs=fields["rhs"],
        param=fields.get("param", "u"),
        subst=tuple(subst),
        name=name,
    )


def load_identity(path: str) -> IdentitySpec:
    source = FsPath(path)
    try:
        text = source.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read identity file {path}: {exc}") from exc
    return parse_identity(text, source.stem)


def _sympify(text: str) -> sympy.Expr:
    names = {name: sympy.Symbol(name) for name in _NAME_RE.findall(text)}
    try:
        return sympy.sympify(text, locals=names)
    except (sympy.SympifyError, SyntaxError, TypeError) as exc:
        raise ParseError(f"cannot parse expression {text!r}") from exc


def _build(expr: sympy.Expr, env: Mapping[str, PolyElement], ring: PolyRing, u_field: FracField) -> PolyElement:
    if expr.is_Symbol:
        try:
            return env[expr.name]
        except KeyError:
            raise ParseError(f"unknown symbol {expr.name!r}") from None
    if expr.is_Integer:
        return ring(int(expr))
    if expr.is_Rational:
        return ring.ground_new(u_field(int(expr.p)) / u_field(int(expr.q)))
    if expr.is_Add:
        total = ring.zero
        for arg in expr.args:
            total += _build(arg, env, ring, u_field)
        return total
    if expr.is_Mul:
        product = ring.one
        for arg in expr.args:
            product *= _build(arg, env, ring, u_field)
        return product
    if expr.is_Pow and expr.exp.is_Integer:
        base = _build(expr.base, env, ring, u_field)
        power = int(expr.exp)
        if power >= 0:
            return base**power
        if not base.is_ground or not base:
            raise ParseError(f"negative power of a non-scalar in {expr}")
        return ring.ground_new(u_field.one / base.LC) ** (-power)
    raise ParseError(f"unsupported expression {expr}")


def check_identity(spec: IdentitySpec) -> IdentityResult:
    """Exact comparison of the specialized, substituted M_v with the right-hand side."""
    v = spec.vector
    n = len(v)
    u_field, u = cyclo_field(spec.point.a)
    q_value, t_value = point_values(spec.point)

    subst = dict(spec.subst) or {f"x{i}": f"x{i}" for i in range(1, n + 1)}
    if sorted(subst) != sorted(f"x{i}" for i in range(1, n + 1)):
        raise ParseError(f"{spec.name}: substitution must give x1..x{n}")
    rhs_expr = _sympify(spec.rhs)
    image_exprs = {var: _sympify(text) for var, text in subst.items()}

    reserved = {"q", "t", "zeta", spec.param}
    symbols = set(rhs_expr.free_symbols)
    for expr in image_exprs.values():
        symbols |= expr.free_symbols
    out_names = sorted(s.name for s in symbols if s.name not in reserved)
    ring = PolyRing(out_names or ["x1"], u_field.to_domain(), lex)

    env: Dict[str, PolyElement] = dict(zip(out_names, ring.gens))
    env[spec.param] = ring.ground_new(u)
    env["zeta"] = ring.ground_new(omega_value(spec.point))
    env["q"] = ring.ground_new(q_value)
    env["t"] = ring.ground_new(t_value)

    rhs = _build(rhs_expr, env, ring, u_field)
    images = [_build(image_exprs[f"x{i}"], env, ring, u_field) for i in range(1, n + 1)]
    rhs_degrees = tuple(sorted({sum(m) for m in rhs.itermonoms()}))
    lhs_degree = sum(v)

    linear = all(img and {sum(m) for m in img.itermonoms()} == {1} for img in images)
    if linear and rhs and rhs_degrees != (lhs_degree,):
        logger.warning("%s: right-hand side has degrees %s, M_%s has degree %d",
                       spec.name, rhs_degrees, render_composition(v), lhs_degree)
        return IdentityResult(spec.name, False, "degree", lhs_degree, rhs_degrees)

    specialized = specialize_mac(v, spec.point)
    lhs = compose_terms(specialized.terms, images, ring.zero)
    holds = lhs == rhs
    if not holds:
        logger.warning("%s: identity does not hold", spec.name)
    return IdentityResult(spec.name, holds, "" if holds else "mismatch", lhs_degree, rhs_degrees)


def identity_files(directory: Optional[str] = None) -> List[FsPath]:
    """Identity files shipped in ``ref/identities`` (or ``directory``)."""
    base = FsPath(directory) if directory else FsPath(__file__).parent.parent / "ref" / "identities"
    return sorted(base.glob("*.txt"))
