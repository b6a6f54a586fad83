import itertools
import random

import pytest

from models import SpecPoint
from services.denom import bound_divides, ratio_numerator
from services.hecke import apply_si
from services.jumps import (
    block_divisor_bound,
    block_jump,
    block_jump_dual,
    dual_jump_lemma_bound,
    jump_lemma_bound,
    jump_spec,
)
from services.specialize import degenerates, substitution_degenerates
from services.ybgraph import eigen_holds, leading_coefficient, leading_data, mac, mac_along, random_path

pytestmark = pytest.mark.slow


def _small_compositions(max_n=4, max_size=6):
    for n in range(1, max_n + 1):
        for v in itertools.product(range(max_size + 1), repeat=n):
            if sum(v) <= max_size:
                yield v


def _block_patterns(max_n=7, max_part=3, max_blocks=5):
    for k in range(1, max_blocks):
        for ell in range(1, max_blocks - k + 1):
            for a in range(max_part):
                for b in range(a + 1, max_part + 1):
                    heads = [(), (max_part,)] + ([(0,)] if a else [])
                    for head in heads:
                        for tail in ((), (0,), (a,)):
                            v = head + (a,) * k + (b,) * ell + tail
                            if len(v) <= max_n:
                                yield v, len(head) + 1, k, ell


def test_eigen_oracle_and_leading_term():
    for v in _small_compositions():
        assert eigen_holds(v), v
        top, coeff = leading_data(v)
        assert top == v and coeff == leading_coefficient(v), v


def test_repeated_neighbours_are_symmetric():
    for v in _small_compositions():
        for i in range(1, len(v)):
            if v[i - 1] == v[i]:
                assert apply_si(mac(v), i) == mac(v), (v, i)


def test_random_paths_are_confluent():
    rng = random.Random(20240611)
    pool = [v for v in _small_compositions() if len(v) >= 2]
    for v in rng.sample(pool, 100):
        assert mac_along(random_path(v, rng)) == mac(v), v


def test_block_jumps_match_stepwise_paths_and_bounds():
    for v, pos, k, ell in _block_patterns():
        spec = jump_spec(v, pos, k, ell)
        m = pos - 1
        end = v[:m] + v[m + k:m + k + ell] + v[m:m + k] + v[m + k + ell:]
        p = mac(v)
        assert block_jump(p, v, spec) == mac(end), (v, pos, k, ell)
        assert block_jump_dual(p, v, spec) == mac(end), (v, pos, k, ell)
        num = ratio_numerator(v, end)
        assert bound_divides(num, block_divisor_bound(spec)), (v, pos, k, ell)
        if ell == 1:
            assert bound_divides(num, jump_lemma_bound(v, pos, k)), v
        if k == 1:
            assert bound_divides(num, dual_jump_lemma_bound(v, pos, ell)), v


@pytest.mark.parametrize(
    "v", [(1, 0, 2), (3, 1, 0), (1, 0, 0, 2), (0, 1, 2, 0), (2, 0, 1, 0), (0, 0, 2, 2), (2, 0, 0, 2)]
)
def test_degeneration_by_factor_and_by_substitution_agree(v):
    for a, b in itertools.product(range(1, 5), repeat=2):
        assert degenerates(v, a, b) == substitution_degenerates(v, SpecPoint(a, b, 1)), (v, a, b)
