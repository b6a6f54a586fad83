import random

import pytest

from models import JumpSegment, Path, Phi, Swap, parse_path
from services.errors import InvalidStep, NvarsMismatch, ParseError, ReplayMismatch
from services.hecke import apply_si
from services.polyarith import QT_FIELD, MacPoly, Q, T
from services.ybgraph import (
    canonical_path,
    clear_memo,
    cmp_dominance,
    cmp_triangle,
    eigen_holds,
    elementary_steps,
    leading_coefficient,
    leading_data,
    mac,
    mac_along,
    random_path,
    render_path,
    replay,
    step_apply,
    yang_parameter,
    yang_swaps_spectrum,
)


def test_steps_move_compositions():
    assert step_apply((1, 0, 2), Phi()) == (0, 2, 2)
    assert step_apply((0, 1, 2), Swap(2)) == (0, 2, 1)
    with pytest.raises(InvalidStep):
        step_apply((1, 0, 2), Swap(1))


def test_jump_segment_expands_into_swaps():
    path = Path.of((0, 2, 2, 3, 3, 0), [JumpSegment(2, 2, 2)])
    assert replay(path) == (0, 3, 3, 2, 2, 0)
    dual = Path.of((0, 2, 2, 3, 3, 0), [JumpSegment(2, 2, 2, dual=True)])
    assert replay(dual) == (0, 3, 3, 2, 2, 0)
    assert [step.i for _, step in elementary_steps(path)] == [3, 2, 4, 3]
    assert [step.i for _, step in elementary_steps(dual)] == [3, 4, 2, 3]


def test_jump_segment_needs_block_shape():
    with pytest.raises(InvalidStep):
        replay(Path.of((0, 2, 1, 3, 3, 0), [JumpSegment(2, 2, 2)]))


def test_parse_path_and_render():
    path = parse_path("000 Phi s2 Φ")
    assert path.steps == (Phi(), Swap(2), Phi())
    assert render_path(path) == "000 -Phi-> 001 -s2-> 010 -Phi-> 101"
    assert parse_path("022330 jump†(2;2,2)").steps == (JumpSegment(2, 2, 2, dual=True),)
    with pytest.raises(ParseError):
        parse_path("000 s")


@pytest.mark.parametrize("v", [(1, 0, 2), (2, 0, 1), (0, 0, 3), (1, 1, 0, 2)])
def test_canonical_path_reaches_vector(v):
    path = canonical_path(v)
    assert path.start == (0,) * len(v)
    assert replay(path) == v


def test_first_polynomials():
    x1, x2 = MacPoly.variable(2, 1), MacPoly.variable(2, 2)
    assert mac((0, 0)) == MacPoly.one(2)
    assert mac((0, 1)) == x2
    assert mac((1, 0)) == x1 + x2 * ((QT_FIELD.one - T) / (QT_FIELD.one - Q * T))
    assert yang_parameter((0, 1), 1) == Q * T


@pytest.mark.parametrize("v", [(1, 0, 2), (2, 1, 0), (0, 2, 1), (1, 1, 0)])
def test_leading_monomial_and_coefficient(v):
    top, coeff = leading_data(v)
    assert top == v
    assert coeff == leading_coefficient(v)


def test_leading_coefficient_formula():
    assert leading_coefficient((1, 0, 2)) == Q ** -1
    assert leading_coefficient((3, 1, 0)) == Q ** -3


@pytest.mark.parametrize("v", [(1, 0), (0, 1), (1, 0, 2), (2, 0, 1), (0, 1, 1)])
def test_macdonald_polynomials_are_hat_y_eigenfunctions(v):
    assert eigen_holds(v)


def test_yang_step_swaps_the_spectrum():
    assert yang_swaps_spectrum((0, 1, 2), 1)
    assert yang_swaps_spectrum((1, 0, 2), 2)


@pytest.mark.parametrize("v", [(1, 0, 2), (2, 1, 0), (1, 2, 0, 1)])
def test_every_path_gives_the_same_polynomial(v):
    rng = random.Random(3)
    for _ in range(3):
        assert mac_along(random_path(v, rng)) == mac(v)


def test_equal_neighbours_give_symmetric_polynomials():
    assert apply_si(mac((1, 1, 0)), 1) == mac((1, 1, 0))
    assert apply_si(mac((0, 2, 2)), 2) == mac((0, 2, 2))


def test_mac_along_checks_nvars():
    with pytest.raises(NvarsMismatch):
        mac_along(canonical_path((1, 0)), MacPoly.one(3))


def test_disk_cache_round_trip(cache_dir):
    first = mac((1, 0, 2))
    assert list(cache_dir.rglob("1_0_2.json"))
    clear_memo()
    assert mac((1, 0, 2)) == first


def test_orders():
    assert cmp_dominance((2, 0, 1), (1, 1, 1)) == "gt"
    assert cmp_dominance((1, 1, 1), (2, 0, 1)) == "lt"
    assert cmp_dominance((0, 2, 0), (1, 0, 1)) is None
    assert cmp_triangle((2, 0, 1), (1, 0, 2)) == "gt"
    assert cmp_triangle((1, 1, 1), (3, 0, 0)) == "lt"
    assert cmp_triangle((1, 0, 2), (1, 0, 2)) == "eq"
    with pytest.raises(NvarsMismatch):
        cmp_triangle((1, 0), (1, 0, 0))
