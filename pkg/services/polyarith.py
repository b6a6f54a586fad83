"""Exact (q,t) arithmetic: bivariate polynomials, their reduced fractions,
multivariate polynomials in x_1..x_N over that field, and the special-form
factorizer used for denominators.

The heavy lifting is delegated to sympy's sparse rings:

- ``QT_RING`` is ZZ[q,t] (``PolyElement``), the home of numerators/denominators.
- ``QT_FIELD`` is ZZ(q,t) (``FracElement``); every element is gcd-reduced and
  sign-normalized (leading coefficient of the denominator positive, lex q > t)
  by sympy on construction.
- ``MacPoly`` wraps a ``PolyElement`` of QQ(q,t)[x_1..x_N] and adds the
  nvars bookkeeping the operator kernels rely on.

Denominators are carried in ``FactoredQt`` form::

    unit * q^e * t^f * prod (1 - q^a t^b)^m,   a >= 0, (a, b) != (0, 0)
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field as dc_field
from functools import lru_cache, reduce
from math import gcd
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple, Union

import sympy
from sympy.polys.domains import ZZ
from sympy.polys.fields import FracElement, field
from sympy.polys.orderings import lex
from sympy.polys.polyerrors import ExactQuotientFailed
from sympy.polys.rings import PolyElement, PolyRing

from services.errors import NotProductForm, NvarsMismatch, ParseError, RangeError

logger = logging.getLogger(__name__)

# ── Coefficient domains ────────────────────────────────────────────────────────

QT_FIELD, Q, T = field("q,t", ZZ, lex)
QT_RING: PolyRing = QT_FIELD.ring
QT_DOMAIN = QT_FIELD.to_domain()
Q_SYM, T_SYM = QT_FIELD.symbols

QtPoly = PolyElement
QtFraction = FracElement
Exponents = Tuple[int, ...]
FactorKey = Tuple[int, int]


def qt_monomial(a: int, b: int) -> QtFraction:
    """Return q^a t^b as a field element (negative exponents allowed)."""
    return Q**a * T**b


def qt_fraction(num: Union[QtPoly, int], den: Union[QtPoly, int] = 1) -> QtFraction:
    """Reduced fraction num/den."""
    if not den:
        raise ZeroDivisionError("zero denominator")
    return QT_FIELD(num) / QT_FIELD(den)


def qt_reduce(f: QtFraction) -> QtFraction:
    """Re-run gcd reduction; idempotent on field elements."""
    return QT_FIELD.new(f.numer, f.denom)


def qt_add(a: QtFraction, b: QtFraction) -> QtFraction:
    return QT_FIELD(a) + QT_FIELD(b)


def qt_mul(a: QtFraction, b: QtFraction) -> QtFraction:
    return QT_FIELD(a) * QT_FIELD(b)


def qt_div(a: QtFraction, b: QtFraction) -> QtFraction:
    if not b:
        raise ZeroDivisionError("division by the zero fraction")
    return QT_FIELD(a) / QT_FIELD(b)


# ── Text rendering of (q,t) values ─────────────────────────────────────────────

def _render_power(name: str, exp: int) -> str:
    if exp == 1:
        return name
    return f"{name}^{exp}"


def _render_term(coeff: int, factors: List[str]) -> Tuple[str, str]:
    """Render one signed term; returns (sign, body)."""
    sign = "-" if coeff < 0 else "+"
    magnitude = abs(coeff)
    if not factors:
        return sign, str(magnitude)
    body = "*".join(factors)
    if magnitude != 1:
        body = f"{magnitude}*{body}"
    return sign, body


def _join_terms(terms: List[Tuple[str, str]]) -> str:
    if not terms:
        return "0"
    first_sign, first_body = terms[0]
    text = first_body if first_sign == "+" else f"-{first_body}"
    for sign, body in terms[1:]:
        text += f" {sign} {body}"
    return text


def render_qt_poly(p: QtPoly) -> str:
    """Canonical text of a ZZ[q,t] polynomial, terms in descending lex order."""
    terms = []
    for (dq, dt), coeff in sorted(p.items(), reverse=True):
        factors = [_render_power("q", dq)] if dq else []
        if dt:
            factors.append(_render_power("t", dt))
        terms.append(_render_term(int(coeff), factors))
    return _join_terms(terms)


def _is_atomic(text: str) -> bool:
    return not any(op in text for op in (" + ", " - ", "*")) and not text.startswith("-")


def render_qt_fraction(f: QtFraction) -> str:
    num = render_qt_poly(f.numer)
    if f.denom == 1:
        return num
    den = render_qt_poly(f.denom)
    num_text = num if _is_atomic(num) else f"({num})"
    den_text = den if _is_atomic(den) else f"({den})"
    return f"{num_text}/{den_text}"


def parse_qt_poly(text: str) -> QtPoly:
    """Inverse of :func:`render_qt_poly` (accepts any sympy-parsable polynomial in q, t)."""
    try:
        expr = sympy.sympify(text, locals={"q": Q_SYM, "t": T_SYM})
        return QT_RING.from_expr(expr)
    except (sympy.SympifyError, ValueError, TypeError) as exc:
        raise ParseError(f"not a polynomial in q, t: {text!r}") from exc


# ── MacPoly ────────────────────────────────────────────────────────────────────

@lru_cache(maxsize=None)
def x_ring(nvars: int) -> PolyRing:
    """QQ(q,t)[x1..xN] with lex order x1 > x2 > ... > xN."""
    if nvars < 1:
        raise RangeError("a MacPoly needs at least one variable")
    return PolyRing([f"x{i}" for i in range(1, nvars + 1)], QT_DOMAIN, lex)


class MacPoly:
    """Sparse polynomial in x_1..x_N with reduced (q,t)-fraction coefficients."""

    __slots__ = ("_poly",)

    def __init__(self, poly: PolyElement):
        self._poly = poly

    # -- constructors --
    @classmethod
    def from_terms(cls, nvars: int, terms: Mapping[Exponents, Union[QtFraction, int]]) -> "MacPoly":
        ring = x_ring(nvars)
        for exps in terms:
            if len(exps) != nvars:
                raise NvarsMismatch(f"exponent tuple {exps} does not have length {nvars}")
        return cls(ring.from_dict({tuple(e): QT_DOMAIN.convert(c) for e, c in terms.items()}))

    @classmethod
    def one(cls, nvars: int) -> "MacPoly":
        return cls(x_ring(nvars).one)

    @classmethod
    def zero(cls, nvars: int) -> "MacPoly":
        return cls(x_ring(nvars).zero)

    @classmethod
    def variable(cls, nvars: int, i: int) -> "MacPoly":
        if not 1 <= i <= nvars:
            raise RangeError(f"variable x{i} out of range for N={nvars}")
        return cls(x_ring(nvars).gens[i - 1])

    @classmethod
    def constant(cls, nvars: int, c: Union[QtFraction, int]) -> "MacPoly":
        return cls(x_ring(nvars).ground_new(QT_DOMAIN.convert(c)))

    # -- accessors --
    @property
    def poly(self) -> PolyElement:
        return self._poly

    @property
    def nvars(self) -> int:
        return self._poly.ring.ngens

    @property
    def terms(self) -> Dict[Exponents, QtFraction]:
        return dict(self._poly.items())

    def coefficient(self, exps: Sequence[int]) -> QtFraction:
        return self._poly.get(tuple(exps), QT_FIELD.zero)

    def is_zero(self) -> bool:
        return not self._poly

    def __bool__(self) -> bool:
        return bool(self._poly)

    def __len__(self) -> int:
        return len(self._poly)

    # -- arithmetic --
    def _check(self, other: "MacPoly") -> None:
        if other.nvars != self.nvars:
            raise NvarsMismatch(f"nvars {self.nvars} vs {other.nvars}")

    def __add__(self, other: "MacPoly") -> "MacPoly":
        return mac_add(self, other)

    def __sub__(self, other: "MacPoly") -> "MacPoly":
        self._check(other)
        return MacPoly(self._poly - other._poly)

    def __neg__(self) -> "MacPoly":
        return MacPoly(-self._poly)

    def __mul__(self, other: Union["MacPoly", QtFraction, int]) -> "MacPoly":
        if isinstance(other, MacPoly):
            return mac_mul(self, other)
        return mac_scale(self, other)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "MacPoly":
        return MacPoly(self._poly**n)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MacPoly):
            return NotImplemented
        return self.nvars == other.nvars and self._poly == other._poly

    def __hash__(self) -> int:
        return hash((self.nvars, frozenset(self._poly.items())))

    def __repr__(self) -> str:
        return f"MacPoly({render_mac(self)})"


def mac_add(p: MacPoly, other: MacPoly) -> MacPoly:
    p._check(other)
    return MacPoly(p.poly + other.poly)


def mac_mul(p: MacPoly, other: MacPoly) -> MacPoly:
    p._check(other)
    return MacPoly(p.poly * other.poly)


def mac_scale(p: MacPoly, c: Union[QtFraction, int]) -> MacPoly:
    return MacPoly(p.poly.mul_ground(QT_DOMAIN.convert(c)))


def compose_terms(
    terms: Iterable[Tuple[Exponents, object]],
    images: Sequence[PolyElement],
    zero: PolyElement,
) -> PolyElement:
    """Sum of coeff * prod images[i]**e_i; coefficients must already live in the target domain."""
    powers: Dict[Tuple[int, int], PolyElement] = {}

    def _power(i: int, e: int) -> PolyElement:
        key = (i, e)
        if key not in powers:
            powers[key] = images[i] ** e
        return powers[key]

    result = zero
    for exps, coeff in terms:
        term = zero.ring.ground_new(coeff)
        for i, e in enumerate(exps):
            if e:
                term = term * _power(i, e)
        result += term
    return result


def substitute_x(p: MacPoly, images: Sequence[MacPoly]) -> MacPoly:
    """Replace x_i by images[i-1]; images may live in a different number of variables."""
    if len(images) != p.nvars:
        raise NvarsMismatch(f"{p.nvars} variables but {len(images)} images")
    target = images[0].nvars
    for img in images:
        if img.nvars != target:
            raise NvarsMismatch("substitution images disagree on nvars")
    return MacPoly(compose_terms(p.poly.items(), [img.poly for img in images], x_ring(target).zero))


# ── MacPoly rendering / JSON ───────────────────────────────────────────────────

def _render_x_monomial(exps: Exponents) -> List[str]:
    return [_render_power(f"x{i}", e) for i, e in enumerate(exps, start=1) if e]


def render_mac(p: MacPoly) -> str:
    """Deterministic text: terms by descending lex x-exponents, coefficient prefix."""
    if p.is_zero():
        return "0"
    pieces: List[Tuple[str, str]] = []
    for exps, coeff in sorted(p.terms.items(), reverse=True):
        mono = _render_x_monomial(exps)
        if coeff.denom == 1 and len(coeff.numer) == 1 and coeff.numer.is_ground:
            pieces.append(_render_term(int(coeff.numer.LC), mono))
            continue
        negated = coeff.denom == 1 and len(coeff.numer) == 1 and coeff.numer.LC < 0
        c_text = render_qt_fraction(-coeff if negated else coeff)
        if not _is_atomic(c_text) and "/" not in c_text:
            c_text = f"({c_text})"
        body = "*".join([c_text] + mono) if mono else c_text
        pieces.append(("-" if negated else "+", body))
    return _join_terms(pieces)


def mac_to_json(p: MacPoly) -> dict:
    return {
        "nvars": p.nvars,
        "terms": [
            {"x": list(exps), "num": render_qt_poly(c.numer), "den": render_qt_poly(c.denom)}
            for exps, c in sorted(p.terms.items(), reverse=True)
        ],
    }


def mac_from_json(data: Mapping) -> MacPoly:
    try:
        terms = data["terms"]
        nvars = int(data.get("nvars") or len(terms[0]["x"]))
        return MacPoly.from_terms(
            nvars,
            {
                tuple(int(e) for e in item["x"]): qt_fraction(parse_qt_poly(item["num"]), parse_qt_poly(item["den"]))
                for item in terms
            },
        )
    except (KeyError, IndexError, TypeError) as exc:
        raise ParseError("malformed MacPoly JSON") from exc


# ── FactoredQt ─────────────────────────────────────────────────────────────────

def canonical_key(a: int, b: int) -> FactorKey:
    """Validate a factor key: a >= 0, and b > 0 when a == 0."""
    if a < 0 or (a == 0 and b <= 0):
        raise RangeError(f"factor (1 - q^{a} t^{b}) is not in canonical form")
    return a, b


def binomial_poly(a: int, b: int) -> Tuple[QtPoly, int]:
    """Polynomial form of (1 - q^a t^b) and the t-shift it absorbed.

    For b < 0 the polynomial is t^{-b} - q^a, i.e. t^{-b} * (1 - q^a t^b).
    """
    if b >= 0:
        return QT_RING.one - QT_RING({(a, b): 1}), 0
    return QT_RING({(0, -b): 1}) - QT_RING({(a, 0): 1}), -b


def _render_factor_monomial(a: int, b: int) -> str:
    parts = [_render_power("q", a)] if a else []
    if b:
        parts.append(_render_power("t", b))
    return " ".join(parts)


@dataclass(frozen=True)
class FactoredQt:
    """unit * q^qexp * t^texp * prod (1 - q^a t^b)^m."""

    unit: int = 1
    qexp: int = 0
    texp: int = 0
    factors: Tuple[Tuple[FactorKey, int], ...] = dc_field(default=())

    @classmethod
    def build(
        cls,
        factors: Union[Mapping[FactorKey, int], Iterable[Tuple[FactorKey, int]]] = (),
        unit: int = 1,
        qexp: int = 0,
        texp: int = 0,
    ) -> "FactoredQt":
        merged: Dict[FactorKey, int] = {}
        items = factors.items() if isinstance(factors, Mapping) else factors
        for key, mult in items:
            key = canonical_key(*key)
            if mult < 0:
                raise RangeError("negative multiplicity")
            if mult:
                merged[key] = merged.get(key, 0) + mult
        return cls(unit, qexp, texp, tuple(sorted(merged.items())))

    @classmethod
    def one(cls) -> "FactoredQt":
        return cls()

    @property
    def factor_map(self) -> Dict[FactorKey, int]:
        return dict(self.factors)

    @property
    def factor_keys(self) -> List[FactorKey]:
        return [key for key, _ in self.factors]

    def is_one(self) -> bool:
        return self.unit == 1 and not self.qexp and not self.texp and not self.factors

    def __mul__(self, other: "FactoredQt") -> "FactoredQt":
        merged = self.factor_map
        for key, mult in other.factors:
            merged[key] = merged.get(key, 0) + mult
        return FactoredQt.build(merged, self.unit * other.unit, self.qexp + other.qexp, self.texp + other.texp)

    def without_unit(self) -> "FactoredQt":
        return FactoredQt(1, self.qexp, self.texp, self.factors)

    def binomial_part(self) -> "FactoredQt":
        """Drop unit and monomial prefactors."""
        return FactoredQt(1, 0, 0, self.factors)

    def binomial_poly(self) -> QtPoly:
        """Polynomial whose associates are the binomial part (t-shifts of negative b folded in)."""
        result = QT_RING.one
        for (a, b), mult in self.factors:
            poly, _ = binomial_poly(a, b)
            result *= poly**mult
        return result

    def expand(self) -> QtFraction:
        value = QT_FIELD(self.unit) * qt_monomial(self.qexp, self.texp)
        for (a, b), mult in self.factors:
            value *= (QT_FIELD.one - qt_monomial(a, b)) ** mult
        return value

    def render(self) -> str:
        pieces: List[str] = []
        if abs(self.unit) != 1:
            pieces.append(str(abs(self.unit)))
        if self.qexp:
            pieces.append(_render_power("q", self.qexp))
        if self.texp:
            pieces.append(_render_power("t", self.texp))
        for (a, b), mult in self.factors:
            text = f"(1-{_render_factor_monomial(a, b)})"
            pieces.append(text if mult == 1 else f"{text}^{mult}")
        body = " ".join(pieces) or "1"
        return f"-{body}" if self.unit < 0 else body

    def to_json(self) -> dict:
        return {
            "unit": self.unit,
            "q": self.qexp,
            "t": self.texp,
            "factors": [[a, b, m] for (a, b), m in self.factors],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "FactoredQt":
        try:
            return cls.build(
                [((int(a), int(b)), int(m)) for a, b, m in data["factors"]],
                int(data.get("unit", 1)),
                int(data.get("q", 0)),
                int(data.get("t", 0)),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError("malformed FactoredQt JSON") from exc

    def __str__(self) -> str:
        return self.render()


# ── Factorization ──────────────────────────────────────────────────────────────

def _shift_out_monomial(p: QtPoly) -> Tuple[QtPoly, int, int]:
    qmin = min(m[0] for m in p.monoms())
    tmin = min(m[1] for m in p.monoms())
    if not qmin and not tmin:
        return p, 0, 0
    shifted = QT_RING({(dq - qmin, dt - tmin): c for (dq, dt), c in p.items()})
    return shifted, qmin, tmin


def _vanishes_on_direction(p: QtPoly, a0: int, b0: int) -> bool:
    """p(s^{-b0}, s^{a0}) == 0 as a Laurent polynomial in s."""
    sums: Dict[int, int] = {}
    for (dq, dt), coeff in p.items():
        key = -b0 * dq + a0 * dt
        sums[key] = sums.get(key, 0) + int(coeff)
    return not any(sums.values())


def _directions(deg_q: int, deg_t: int) -> List[FactorKey]:
    found: List[FactorKey] = [(0, 1)] if deg_t else []
    for a0 in range(1, deg_q + 1):
        for b0 in range(-deg_t, deg_t + 1):
            if gcd(a0, abs(b0)) == 1:
                found.append((a0, b0))
    return found


def _degrees(p: QtPoly) -> Tuple[int, int]:
    monoms = p.monoms()
    return max(m[0] for m in monoms), max(m[1] for m in monoms)


def factor_qt(p: QtPoly) -> FactoredQt:
    """Factor p as unit * q^e * t^f * prod (1 - q^a t^b)^m.

    Raises
    ------
    NotProductForm
        When a non-constant residual remains after every candidate binomial
        has been divided out.
    """
    p = QT_RING(p)
    if not p:
        raise RangeError("cannot factor the zero polynomial")
    residual, qexp, texp = _shift_out_monomial(p)
    found: Dict[FactorKey, int] = {}

    deg_q, deg_t = _degrees(residual)
    for a0, b0 in _directions(deg_q, deg_t):
        if residual.is_ground:
            break
        if not _vanishes_on_direction(residual, a0, b0):
            continue
        cur_q, cur_t = _degrees(residual)
        r_max = min(cur_q // a0 if a0 else cur_t, cur_t // abs(b0) if b0 else cur_q)
        for r in range(r_max, 0, -1):
            poly, shift = binomial_poly(r * a0, r * b0)
            while True:
                try:
                    quotient = residual.exquo(poly)
                except ExactQuotientFailed:
                    break
                residual = quotient
                found[(r * a0, r * b0)] = found.get((r * a0, r * b0), 0) + 1
                texp += shift

    if not residual.is_ground:
        logger.warning("denominator outside product form, residual %s", render_qt_poly(residual))
        raise NotProductForm(f"non-constant residual {render_qt_poly(residual)}", residual)

    result = FactoredQt.build(found, int(residual.LC), qexp, texp)
    if result.expand() != QT_FIELD(p):
        raise RuntimeError(f"factor_qt reassembly failed for {render_qt_poly(p)}")
    return result


def divides_spec(target: FactorKey, factor: FactorKey) -> bool:
    """True iff factor == r * target for some integer r >= 1."""
    a, b = target
    fa, fb = factor
    if (a, b) == (0, 0) or (fa, fb) == (0, 0):
        raise RangeError("(0, 0) is not a binomial factor")
    if a:
        r, rem = divmod(fa, a)
        return rem == 0 and r >= 1 and fb == r * b
    if fa or not b:
        return False
    r, rem = divmod(fb, b)
    return rem == 0 and r >= 1


def strip_monomial(p: QtPoly) -> QtPoly:
    """p with its monomial content divided out."""
    if not p:
        return p
    return _shift_out_monomial(QT_RING(p))[0]


def qt_divides(divisor: QtPoly, dividend: QtPoly) -> bool:
    """Exact divisibility in ZZ[q,t] after stripping monomial content and sign."""
    divisor, dividend = strip_monomial(divisor), strip_monomial(dividend)
    if not divisor:
        return not dividend
    if not dividend:
        return True
    try:
        dividend.exquo(divisor)
    except ExactQuotientFailed:
        return False
    return True


def qt_lcm(polys: Iterable[QtPoly]) -> QtPoly:
    return reduce(lambda acc, p: acc.lcm(p), polys, QT_RING.one)


def factored_gcd(f: FactoredQt, g: FactoredQt) -> FactoredQt:
    """gcd of two factored values: exact on the binomial parts, min on q/t powers."""
    common = factor_qt(f.binomial_poly().gcd(g.binomial_poly()))
    return FactoredQt(1, min(f.qexp, g.qexp), min(f.texp, g.texp), common.factors)


def monomial_content(p: QtPoly) -> Tuple[int, int]:
    """(min q-degree, min t-degree) over the terms of a nonzero p."""
    if not p:
        raise RangeError("the zero polynomial has no monomial content")
    _, qmin, tmin = _shift_out_monomial(QT_RING(p))
    return qmin, tmin
