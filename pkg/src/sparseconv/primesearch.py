"""Collision-free prime moduli for exponentially long sparse vectors.

Given distinct indices, find a prime p from a pool such that all indices
stay distinct mod p.  The product of every pairwise difference is divided
out of the product of the pool; whatever survives is a product of good
primes, and one of them is isolated by halving the pool with gcd tests.
"""

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

from .errors import PoolTooSmallError
from .fields import next_prime


class ProductTree:
    """Balanced product tree; node (lo, hi) holds prod(values[lo:hi])."""

    def __init__(self, values):
        values = [int(v) for v in values]
        if not values:
            raise ValueError("product tree needs at least one value")
        self.values = values
        self._nodes = {}
        self.root = self._build(0, len(values))

    def _build(self, lo, hi):
        if hi - lo == 1:
            prod = self.values[lo]
        else:
            mid = lo + (hi - lo) // 2
            prod = self._build(lo, mid) * self._build(mid, hi)
        self._nodes[lo, hi] = prod
        return prod

    def product(self, lo, hi):
        return self._nodes[lo, hi]


def product_tree(values):
    """Exact product of ``values`` through a balanced pairwise tree."""
    return ProductTree(values).root


@lru_cache(maxsize=8)
def prime_pool(count, bits):
    """The ``count`` smallest primes with exactly ``bits`` bits."""
    lo, hi = 1 << (bits - 1), 1 << bits
    out = []
    p = next_prime(max(lo, 2))
    while len(out) < count:
        if p >= hi:
            raise PoolTooSmallError(f"only {len(out)} primes have {bits} bits")
        out.append(p)
        p = next_prime(p + 1)
    return tuple(out)


def pool_bound(indices, smallest_prime):
    """Upper bound on how many pool primes can divide some pairwise difference.

    A difference d has at most floor(log d / log pmin) distinct prime
    factors that are >= pmin; this sums a bit-length version of that.
    """
    step = smallest_prime.bit_length() - 1
    if step < 1:
        raise ValueError("pool primes must be at least 2")
    return sum((abs(a - b).bit_length() - 1) // step for a, b in combinations(indices, 2))


@dataclass
class PrimeSearchState:
    pool: tuple
    Q: int
    D: int
    R: int
    bound: int


def prime_search_state(indices, pool):
    idx = [int(i) for i in indices]
    diffs = [abs(a - b) for a, b in combinations(idx, 2)]
    tree = ProductTree(pool)
    Q = tree.root
    D = product_tree(diffs)
    R = Q // math.gcd(Q, D)
    return PrimeSearchState(tuple(pool), Q, D, R, pool_bound(idx, min(pool))), tree


def exp_prime_search(indices, prime_count=4096, prime_bits=20, pool=None):
    """A prime p from the pool under which all ``indices`` have distinct residues.

    ``pool`` overrides the default pool of the ``prime_count`` smallest
    ``prime_bits``-bit primes.  Raises PoolTooSmallError when no pool prime
    works; the error carries the collision bound for the given indices.
    """
    idx = [int(i) for i in indices]
    if len(set(idx)) != len(idx) or len(idx) < 2:
        raise ValueError("need at least two distinct indices")
    pool = tuple(sorted(pool)) if pool is not None else prime_pool(prime_count, prime_bits)
    state, tree = prime_search_state(idx, pool)
    if state.R == 1:
        raise PoolTooSmallError(
            f"all {len(pool)} pool primes divide some difference "
            f"(at most {state.bound} can)", bound=state.bound)
    lo, hi = 0, len(pool)
    while hi - lo > 1:
        mid = lo + (hi - lo) // 2
        if math.gcd(tree.product(lo, mid), state.R) > 1:
            hi = mid
        else:
            lo = mid
    p = pool[lo]
    if len({i % p for i in idx}) != len(idx):
        raise AssertionError(f"prime {p} does not separate the indices")
    return p
