import pytest
from hypothesis import given
from hypothesis import strategies as st

from services.errors import IndexOutOfRange
from services.polyarith import QT_FIELD, Q, T
from services.spectral import (
    entry_ratio,
    entry_value,
    initial_spectrum,
    is_injective,
    lambda_step,
    render_spectrum,
    si_step,
    spectre_hat,
    spectre_y,
    spectrum_to_json,
    std,
)
from services.ybgraph import canonical_path, walk_spectrum

compositions = st.lists(st.integers(0, 3), min_size=1, max_size=6)


def test_std_breaks_ties_by_position():
    assert std((1, 0, 2, 2, 0, 1)) == (4, 2, 6, 5, 1, 3)
    assert std((0, 0, 0)) == (3, 2, 1)


def test_hat_spectrum_of_102():
    assert spectre_hat((1, 0, 2)) == ((1, 1), (0, 0), (2, 2))
    assert render_spectrum(spectre_hat((1, 0, 2))) == "[q*t, 1, q^2*t^2]"


def test_unhatted_spectrum_drops_position():
    assert spectre_y((1, 0, 2)) == ((1, 1), (0, -1), (2, 0))


def test_known_spectra():
    assert render_spectrum(spectre_hat((0, 2, 2, 2, 3, 0))) == "[t, q^2*t^4, q^2*t^3, q^2*t^2, q^3*t^5, 1]"
    assert render_spectrum(spectre_hat((0, 2, 2, 3, 3, 0))) == "[t, q^2*t^3, q^2*t^2, q^3*t^5, q^3*t^4, 1]"


def test_zero_vector_has_initial_spectrum():
    assert spectre_hat((0, 0, 0, 0)) == initial_spectrum(4)


def test_lambda_and_swap_steps():
    s = ((0, 2), (0, 1), (0, 0))
    assert lambda_step(s) == ((0, 1), (0, 0), (1, 2))
    assert si_step(s, 2) == ((0, 2), (0, 0), (0, 1))
    assert entry_ratio(s, 1) == (0, -1)
    with pytest.raises(IndexOutOfRange):
        si_step(s, 3)


def test_spectrum_json():
    assert spectrum_to_json(((1, 1), (0, 0))) == [{"q": 1, "t": 1}, {"q": 0, "t": 0}]


@given(compositions)
def test_std_is_a_permutation(v):
    assert sorted(std(v)) == list(range(1, len(v) + 1))
    assert is_injective(spectre_hat(v))


@given(compositions)
def test_walking_a_path_lands_on_the_end_spectrum(v):
    assert walk_spectrum(canonical_path(v)) == spectre_hat(v)


def test_spectra_of_102201():
    v = (1, 0, 2, 2, 0, 1)
    assert spectre_hat(v) == ((1, 3), (0, 1), (2, 5), (2, 4), (0, 0), (1, 2))
    assert render_spectrum(spectre_hat(v)) == "[q*t^3, t, q^2*t^5, q^2*t^4, 1, q*t^2]"
    assert spectre_y(v) == ((1, 3), (0, 0), (2, 3), (2, 1), (0, -4), (1, -3))


def test_entry_value_is_the_monomial():
    assert entry_value((2, -1)) == Q**2 / T
    assert entry_value((0, 0)) == QT_FIELD.one


@given(compositions)
def test_equal_neighbours_differ_by_t(v):
    s = spectre_hat(v)
    for i in range(1, len(v)):
        if v[i - 1] == v[i]:
            assert entry_value(s[i - 1]) / entry_value(s[i]) == T
            assert entry_ratio(s, i) == (0, -1)
