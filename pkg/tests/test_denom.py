import pytest

from models import JumpSegment, Path, Phi, parse_path
from services.denom import (
    algo_jump,
    algo_opt,
    algo_triv,
    certificate,
    certificate_sound,
    conjunction,
    degeneracy_points,
    den_of,
    disjunction,
    ratio_factored,
    triv_qpower_report,
)
from services.errors import EndpointMismatch, RangeError
from services.polyarith import FactoredQt
from services.ybgraph import canonical_path


@pytest.mark.parametrize(
    "v, expected",
    [
        ((1, 0, 2), "q (1-q t)"),
        ((1, 0, 0), "(1-q t)"),
        ((3, 1, 0), "q^3 (1-q t) (1-q^2 t) (1-q^3 t^2)"),
        ((1, 0, 0, 2), "q (1-q t) (1-q t^2)"),
        ((0, 1, 2, 0), "q (1-q t^2) (1-q^2 t^3)"),
        ((2, 0, 1, 0), "q (1-q t) (1-q t^2) (1-q^2 t^2)"),
        ((0, 0, 2, 2), "q^2 (1-q t) (1-q t^2)"),
        ((2, 0, 0, 2), "q^2 (1-q t) (1-q^2 t^2)"),
        ((0, 0, 0), "1"),
    ],
)
def test_den_goldens(v, expected):
    assert den_of(v).render() == expected


@pytest.mark.slow
def test_den_of_six_variable_vertex():
    assert den_of((0, 2, 2, 2, 3, 0)).render() == "q^6 (1-q t) (1-q^2 t^2) (1-q^2 t^4) (1-q^3 t^5)"


@pytest.mark.slow
@pytest.mark.parametrize(
    "start, end, extra",
    [
        ((0, 2, 2, 2, 3, 0), (0, 2, 2, 3, 2, 0), {(1, 3): 1}),
        ((0, 2, 2, 2, 3, 0), (0, 2, 3, 2, 2, 0), {(1, 2): 1}),
        ((0, 2, 2, 2, 3, 0), (0, 3, 2, 2, 2, 0), {(1, 1): 1}),
        ((0, 2, 3, 3, 3, 0), (0, 3, 3, 3, 2, 0), {(1, 1): 1}),
        ((0, 2, 2, 3, 3, 0), (0, 3, 3, 2, 2, 0), {(1, 1): 1, (1, 2): 1}),
    ],
)
def test_den_ratios_along_jumps(start, end, extra):
    num, den = ratio_factored(start, end)
    assert num.factor_map == extra
    assert den.factor_map == {}


@pytest.mark.slow
def test_den_ratio_can_lose_a_factor():
    num, den = ratio_factored((0, 1, 1, 1, 2, 0), (0, 2, 1, 1, 1, 0))
    assert num.factor_map == {(1, 1): 1}
    assert den.factor_map == {(1, 4): 1}


def test_triv_bound_counts_one_factor_per_swap():
    path = parse_path("001 s2 s1")
    assert algo_triv(path) == FactoredQt.build({(1, 1): 1, (1, 2): 1})


def test_jump_bound_is_sharper_than_triv():
    path = Path.of((0, 0, 1), [JumpSegment(1, 2, 1)])
    assert algo_jump(path) == FactoredQt.build({(1, 1): 1})
    assert algo_opt(path).factor_map == {(1, 1): 1}
    assert certificate_sound(certificate(path, "jump"))


@pytest.mark.parametrize("v", [(1, 0, 2), (2, 0, 1), (3, 1, 0), (1, 0, 0, 2), (2, 0, 1, 0)])
@pytest.mark.parametrize("algo", ["triv", "opt"])
def test_certificates_are_sound(v, algo):
    assert certificate_sound(certificate(canonical_path(v), algo))


def test_certificate_json():
    cert = certificate(parse_path("000 Phi"), "triv", "max_part")
    assert cert.end == (0, 0, 1)
    assert cert.to_json() == {
        "path": ["Phi"],
        "start": [0, 0, 0],
        "algo": "triv",
        "bound": {"unit": 1, "q": 0, "t": 0, "factors": []},
    }


def test_unknown_algorithm_and_rule():
    with pytest.raises(RangeError):
        certificate(parse_path("000 Phi"), "best")
    with pytest.raises(RangeError):
        algo_triv(parse_path("000 Phi"), "guess")


def test_conjunction_multiplies_bounds():
    first = certificate(parse_path("000 Phi"), "triv")
    second = certificate(Path.of((0, 0, 1), [JumpSegment(1, 2, 1)]), "jump")
    joined = conjunction(first, second)
    assert joined.end == (1, 0, 0)
    assert joined.algo == "triv*jump"
    assert joined.bound == first.bound * second.bound
    assert joined.path.steps == (Phi(), JumpSegment(1, 2, 1))
    with pytest.raises(EndpointMismatch):
        conjunction(second, first)


def test_disjunction_takes_gcd():
    path = Path.of((0, 0, 1), [JumpSegment(1, 2, 1)])
    both = disjunction(certificate(path, "triv"), certificate(path, "jump"))
    assert both.algo == "gcd(triv,jump)"
    assert both.bound.factor_map == {(1, 1): 1}
    same = certificate(path, "jump")
    assert disjunction(same, same) is same
    with pytest.raises(EndpointMismatch):
        disjunction(same, certificate(parse_path("000 Phi"), "triv"))


def test_printed_affine_rule_undercounts_q_power():
    report = triv_qpower_report(canonical_path((1, 0, 2)))
    assert report["brute"] == 1
    assert report["printed"] == 0
    assert not report["printed_ok"]
    assert report["max_part_ok"]


def test_degeneracy_points():
    assert degeneracy_points((3, 1, 0)) == [(1, 1), (2, 1), (3, 2)]
    assert degeneracy_points((2, 0, 1, 0)) == [(1, 1), (1, 2), (2, 2)]
    assert degeneracy_points((0, 0, 1)) == []
