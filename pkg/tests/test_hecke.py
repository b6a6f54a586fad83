import random

import pytest

from services.errors import AlphaIsOne, IndexOutOfRange, RangeError
from services.hecke import (
    RELATION_IDS,
    apply_aff,
    apply_del,
    apply_pi,
    apply_si,
    apply_tau,
    apply_tau_inv,
    apply_Ti,
    apply_Ti_inv,
    apply_xi,
    apply_Y,
    apply_yang,
    apply_Yhat,
    check_relation,
    kernel_matches_symmetry,
    random_macpoly,
    run_relation_suite,
    yang_shift,
)
from services.polyarith import QT_FIELD, MacPoly, Q, T, qt_monomial
from services.settings import section


def _x(n, i):
    return MacPoly.variable(n, i)


def test_ti_on_linear_monomials():
    x1, x2 = _x(2, 1), _x(2, 2)
    assert apply_Ti(x1, 1) == x1 * (T - 1) + x2 * T
    assert apply_Ti(x2, 1) == x1
    assert apply_Ti(MacPoly.one(2), 1) == MacPoly.constant(2, T)


def test_divided_difference_and_isobaric_variant():
    x1, x2 = _x(2, 1), _x(2, 2)
    assert apply_del(x1 * x1, 1) == x1 + x2
    assert apply_del(x2, 1) == MacPoly.constant(2, -1)
    assert apply_del(x1 * x2, 1).is_zero()
    assert apply_pi(x1, 1) == x1 + x2
    assert apply_si(x1 * x1 * x2, 1) == x1 * x2 * x2


def test_ti_inverse_undoes_ti():
    rng = random.Random(7)
    for _ in range(5):
        p = random_macpoly(3, 3, rng)
        assert apply_Ti_inv(apply_Ti(p, 2), 2) == p
        assert apply_Ti(apply_Ti_inv(p, 1), 1) == p


def test_tau_rotates_and_divides_by_q():
    x1, x3 = _x(3, 1), _x(3, 3)
    assert apply_tau(x1) == x3 * qt_monomial(-1, 0)
    assert apply_tau_inv(x3) == x1 * Q
    assert apply_aff(MacPoly.one(3)) == x3


def test_yang_with_unit_parameter_is_refused():
    with pytest.raises(AlphaIsOne):
        apply_yang(_x(2, 1), 1, QT_FIELD.one)


def test_indices_are_checked():
    with pytest.raises(IndexOutOfRange):
        apply_Ti(MacPoly.one(2), 2)
    with pytest.raises(IndexOutOfRange):
        apply_Y(MacPoly.one(2), 3)
    with pytest.raises(RangeError):
        random_macpoly(0, 2, random.Random(0))


def test_constant_is_a_y_eigenfunction():
    one = MacPoly.one(3)
    for i in range(1, 4):
        assert apply_Yhat(one, i) == one * qt_monomial(0, 3 - i)
        assert apply_Y(one, i) == one * qt_monomial(0, 4 - 2 * i)


@pytest.mark.parametrize("tag", RELATION_IDS)
def test_relation_holds_on_random_polynomials(tag):
    rng = random.Random(RELATION_IDS.index(tag))
    for _ in range(4):
        assert check_relation(tag, random_macpoly(3, 2, rng))


def test_relation_suite_reports_no_failures():
    failures = run_relation_suite(nvars=3, trials=3, degree=2, seed=11, tags=["quad", "braid", "tau-y"])
    assert failures == {"quad": [], "braid": [], "tau-y": []}


def test_unknown_relation_id():
    with pytest.raises(RangeError):
        check_relation("nope", MacPoly.one(2))


def test_hecke_generators_commute_with_distant_x_and_y():
    x1, x2, x3 = _x(4, 1), _x(4, 2), _x(4, 3)
    assert check_relation("hetcomm", x1 * x3 + x2 * Q)
    assert check_relation("hetcomm", x1 * x1 * x2 - x3 * T)


def test_hecke_generator_does_not_commute_with_adjacent_x():
    x1 = _x(2, 1)
    assert apply_xi(apply_Ti(x1, 1), 2) != apply_Ti(apply_xi(x1, 2), 1)


@pytest.mark.slow
@pytest.mark.parametrize("nvars", [3, 4])
def test_relation_suite_full_catalog(nvars):
    conf = section("relations")
    failures = run_relation_suite(nvars=nvars, trials=conf["trials"], degree=conf["degree"], seed=conf["seed"])
    assert conf["trials"] >= 50
    assert set(failures) == set(RELATION_IDS)
    assert all(not trials for trials in failures.values())


def test_symmetric_polynomials_are_exactly_the_t_eigenvectors():
    x1, x2 = _x(2, 1), _x(2, 2)
    assert kernel_matches_symmetry(x1 + x2, 1)
    assert kernel_matches_symmetry(x1 * x2 * Q, 1)
    assert kernel_matches_symmetry(x1 - x2 * T, 1)


@pytest.mark.parametrize("seed", range(5))
def test_ti_agrees_with_demazure_lusztig_formula(seed):
    rng = random.Random(seed)
    p = random_macpoly(3, 3, rng)
    for i in (1, 2):
        reference = apply_del(p, i) * (_x(3, i + 1) * T - _x(3, i)) + p * T
        assert apply_Ti(p, i) == reference
        assert apply_Ti_inv(apply_Ti(p, i), i) == p


def test_yang_operator_is_ti_plus_shift():
    rng = random.Random(7)
    p = random_macpoly(3, 3, rng)
    alpha = Q * T**2
    assert apply_yang(p, 2, alpha) == apply_Ti(p, 2) + p * yang_shift(alpha)
