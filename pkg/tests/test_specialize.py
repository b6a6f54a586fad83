import pytest

from models import SpecPoint
from services.errors import DegeneratePolynomial, ParseError, RangeError
from services.polyarith import QT_RING, divides_spec
from services.specialize import (
    check_identity,
    cyclo_field,
    degenerates,
    evaluate_monomial,
    evaluate_qt,
    identity_files,
    load_identity,
    omega_value,
    parse_identity,
    parse_point,
    point_values,
    specialize_mac,
    specialized_symmetric,
    substitution_degenerates,
)

q, t = QT_RING.gens

IDENTITIES = {path.stem: path for path in identity_files()}


def test_parse_point():
    assert parse_point("q*t^2=1") == SpecPoint(1, 2, 1)
    assert parse_point("q^3*t^3=1 omega=2") == SpecPoint(3, 3, 2)
    assert parse_point("q^2 t^3 = 1", omega_power=0) == SpecPoint(2, 3, 0)
    with pytest.raises(ParseError):
        parse_point("q+t=1")
    with pytest.raises(RangeError):
        parse_point("q^3*t^3=1 omega=0")


def test_point_substitution_satisfies_the_relation():
    for point in (SpecPoint(1, 2), SpecPoint(2, 3, 0), SpecPoint(2, 4, 1), SpecPoint(3, 3, 1)):
        u_field, _ = cyclo_field(point.a)
        assert evaluate_monomial(point, point.a, point.b) == u_field.one
        assert not evaluate_qt(1 - q**point.a * t**point.b, point)


@pytest.mark.parametrize(
    "point",
    [SpecPoint(1, 2), SpecPoint(2, 1), SpecPoint(2, 3, 0), SpecPoint(2, 4, 1), SpecPoint(3, 3, 1), SpecPoint(3, 3, 2)],
    ids=lambda p: f"{p.label}-w{p.omega_power}",
)
def test_only_multiples_of_the_point_evaluate_to_one(point):
    u_field, _ = cyclo_field(point.a)
    for a in range(7):
        for b in range(7):
            if (a, b) == (0, 0):
                continue
            is_one = evaluate_monomial(point, a, b) == u_field.one
            assert is_one == divides_spec((point.a, point.b), (a, b)), (a, b)


def test_point_values_at_q_t_squared():
    u_field, u = cyclo_field(1)
    assert point_values(SpecPoint(1, 2)) == (u**-2, u)
    assert omega_value(SpecPoint(2, 4, 1)) == -u_field.one


def test_degeneration_follows_den_factors():
    assert degenerates((3, 1, 0), 1, 1)
    assert not degenerates((3, 1, 0), 2, 2)
    assert degenerates((1, 0, 0, 2), 1, 2)


def test_specialize_mac_keeps_leading_coefficient():
    spec = specialize_mac((1, 0, 2), SpecPoint(1, 2))
    _, u = cyclo_field(1)
    assert spec.term_map[(1, 0, 2)] == u**2
    assert spec.to_json()["point"] == "q*t^2=1"
    assert "x1*x3^2" in spec.render()


def test_specialize_mac_reports_vanishing_denominator():
    point = SpecPoint(1, 2)
    with pytest.raises(DegeneratePolynomial) as info:
        specialize_mac((1, 0, 0, 2), point)
    assert info.value.factor == (1, 2)
    assert substitution_degenerates((1, 0, 0, 2), point)
    assert not substitution_degenerates((1, 0, 2), point)


def test_specialization_keeps_symmetry():
    assert specialized_symmetric((1, 1, 0), SpecPoint(1, 2), 1)


def test_parse_identity_format():
    spec = parse_identity(
        """
        # comment
        vector: 1,0
        point: q*t^2=1
        param: v
        subst: x1=y, x2=t*y
        rhs: y
             + y
        """.replace("\n        ", "\n"),
        "demo",
    )
    assert spec.vector == (1, 0)
    assert spec.param == "v"
    assert spec.subst == (("x1", "y"), ("x2", "t*y"))
    assert spec.rhs == "y + y"
    assert spec.name == "demo"


def test_parse_identity_errors():
    with pytest.raises(ParseError):
        parse_identity("vector: 1,0\npoint: q*t=1\n")
    with pytest.raises(ParseError):
        parse_identity("vector 1,0\n")
    with pytest.raises(ParseError):
        load_identity("no/such/file.txt")


def test_identity_for_small_vector(tmp_path):
    source = tmp_path / "m10.txt"
    source.write_text("vector: 1,0\npoint: q*t^2=1\nrhs: x1 + (1 - u)/(1 - u**-1)*x2\n", encoding="utf-8")
    result = check_identity(load_identity(str(source)))
    assert result.holds
    assert result.name == "m10"
    assert result.lhs_degree == 1


def test_wrong_identity_is_reported(tmp_path):
    source = tmp_path / "bad.txt"
    source.write_text("vector: 1,0\npoint: q*t^2=1\nrhs: x1 + x2\n", encoding="utf-8")
    result = check_identity(load_identity(str(source)))
    assert not result.holds
    assert result.reason == "mismatch"


@pytest.mark.parametrize("name", ["m210210", "m221100"])
def test_published_products_with_wrong_degree_are_flagged(name):
    result = check_identity(load_identity(str(IDENTITIES[name])))
    assert not result.holds
    assert result.reason == "degree"
    assert result.lhs_degree == 6
    assert result.rhs_degrees[0] > 6


def test_m2100_identity():
    assert check_identity(load_identity(str(IDENTITIES["m2100"]))).holds


@pytest.mark.slow
@pytest.mark.parametrize("name", ["m3210", "m420420", "m4202020", "m630630"])
def test_factorization_identities(name):
    result = check_identity(load_identity(str(IDENTITIES[name])))
    assert result.holds, result.to_json()
