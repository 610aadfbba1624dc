import math
import random
from functools import reduce
from itertools import combinations

import pytest
from hypothesis import given, strategies as st

from sparseconv import exp_prime_search, is_prime, product_tree
from sparseconv.errors import PoolTooSmallError
from sparseconv.primesearch import ProductTree, pool_bound, prime_pool, prime_search_state


class TestProductTree:
    def test_small(self):
        assert product_tree([5, 7, 11]) == 385

    def test_singleton(self):
        assert product_tree([2 ** 100 + 3]) == 2 ** 100 + 3

    def test_against_fold(self):
        rng = random.Random(1000)
        vals = [rng.getrandbits(64) for _ in range(1000)]
        assert product_tree(vals) == reduce(lambda a, b: a * b, vals, 1)

    @given(st.lists(st.integers(1, 2 ** 70), min_size=1, max_size=50))
    def test_nodes(self, vals):
        tree = ProductTree(vals)
        assert tree.product(0, len(vals)) == math.prod(vals)

    def test_empty(self):
        with pytest.raises(ValueError):
            product_tree([])


class TestPrimeSearch:
    def test_micro_example(self):
        state, _ = prime_search_state([0, 5, 12], (5, 7, 11))
        assert (state.D, state.Q, math.gcd(state.Q, state.D), state.R) == (420, 385, 35, 11)
        p = exp_prime_search([0, 5, 12], pool=[5, 7, 11])
        assert p == 11
        assert sorted(i % p for i in (0, 5, 12)) == [0, 1, 5]
        # brute force over the pool agrees
        assert [q for q in (5, 7, 11) if len({i % q for i in (0, 5, 12)}) == 3] == [11]

    def test_adjacent_indices(self):
        pool = prime_pool(4096, 20)
        assert exp_prime_search([0, 1]) == pool[0]

    def test_wide_random(self):
        rng = random.Random(128)
        idx = [rng.getrandbits(128) for _ in range(32)]
        p = exp_prime_search(idx, 4096, 20)
        assert is_prime(p) and p.bit_length() == 20
        assert len({i % p for i in idx}) == 32

    @given(st.sets(st.integers(0, 2 ** 96), min_size=2, max_size=12))
    def test_residues_distinct(self, idx):
        p = exp_prime_search(sorted(idx), 512, 16)
        assert len({i % p for i in idx}) == len(idx)

    def test_pool_too_small(self):
        # 2*3*5*7 = 210 divides 210 - 0, so no pool prime separates 0 and 210
        with pytest.raises(PoolTooSmallError) as exc:
            exp_prime_search([0, 210], pool=[2, 3, 5, 7])
        assert exc.value.bound == pool_bound([0, 210], 2)

    def test_bound_is_sound(self):
        rng = random.Random(3)
        idx = [rng.getrandbits(64) for _ in range(6)]
        pool = prime_pool(64, 12)
        killed = {p for p in pool for a, b in combinations(idx, 2) if (a - b) % p == 0}
        assert len(killed) <= pool_bound(idx, min(pool))

    def test_pool_shape(self):
        pool = prime_pool(100, 20)
        assert len(pool) == 100 and all(p.bit_length() == 20 and is_prime(p) for p in pool)
        with pytest.raises(PoolTooSmallError):
            prime_pool(10, 4)

    def test_rejects_duplicates(self):
        with pytest.raises(ValueError):
            exp_prime_search([3, 3])
