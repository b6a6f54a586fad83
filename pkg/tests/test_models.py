import pytest

from models import JumpSegment, JumpSpec, SpecPoint, StaircaseParams, parse_composition, render_composition
from models.composition import partition, phi, phi_inverse, swap
from services.errors import ParseError, RangeError


def test_parse_composition_forms():
    assert parse_composition("102") == (1, 0, 2)
    assert parse_composition("1,0,2") == (1, 0, 2)
    assert parse_composition("[10, 0, 2]") == (10, 0, 2)
    with pytest.raises(ParseError):
        parse_composition("1;0")
    with pytest.raises(ParseError):
        parse_composition("")


def test_render_composition():
    assert render_composition((1, 0, 2)) == "102"
    assert render_composition((10, 0, 2)) == "10,0,2"


def test_composition_moves():
    assert phi((1, 0, 2)) == (0, 2, 2)
    assert phi_inverse((0, 2, 2)) == (1, 0, 2)
    assert swap((0, 1, 2), 2) == (0, 2, 1)
    assert partition((0, 2, 1)) == (2, 1, 0)
    with pytest.raises(RangeError):
        phi_inverse((1, 0))


def test_jump_models_validate():
    assert JumpSegment(2, 2, 2, dual=True).label == "jump†(2;2,2)"
    with pytest.raises(RangeError):
        JumpSegment(0, 1, 1)
    spec = JumpSpec(pos=2, k=2, ell=2, a=2, b=3, alpha_exp=2, beta_exp=5)
    assert (spec.m, spec.end, spec.gap, spec.spread) == (1, 5, 1, 3)
    with pytest.raises(RangeError):
        JumpSpec(pos=1, k=1, ell=1, a=2, b=2, alpha_exp=0, beta_exp=1)


def test_spec_point():
    point = SpecPoint(2, 4, 1)
    assert (point.d, point.q_shift, point.t_shift) == (2, -2, 1)
    assert point.label == "q^2*t^4=1"
    with pytest.raises(RangeError):
        SpecPoint(0, 1)
    with pytest.raises(RangeError):
        SpecPoint(2, 2, 0)


def test_staircase_params():
    params = StaircaseParams(2, 3, 4)
    assert params.nvars == 8
    assert params.target_factor == (3, 3)
    with pytest.raises(RangeError):
        StaircaseParams(1, 1, 2, m=3)
    with pytest.raises(RangeError):
        StaircaseParams(1, 2, 2, b=3)
