"""Finite fields GF(2^l) and F_q, primality, and NTT prime selection."""

import math
from dataclasses import dataclass
from functools import lru_cache

from .errors import FieldMismatchError, NoNTTPrimeError

# Lowest-weight irreducible polynomial per degree: the trinomial
# x^l + x^k + 1 with smallest k, else the smallest pentanomial.
IRREDUCIBLE = {
    1: 0x3,  # x + 1
    2: 0x7,  # x^2 + x + 1
    3: 0xB,  # x^3 + x + 1
    4: 0x13,  # x^4 + x + 1
    5: 0x25,  # x^5 + x^2 + 1
    6: 0x43,  # x^6 + x + 1
    7: 0x83,  # x^7 + x + 1
    8: 0x11B,  # x^8 + x^4 + x^3 + x + 1
    9: 0x203,  # x^9 + x + 1
    10: 0x409,  # x^10 + x^3 + 1
    11: 0x805,  # x^11 + x^2 + 1
    12: 0x1009,  # x^12 + x^3 + 1
    13: 0x201B,  # x^13 + x^4 + x^3 + x + 1
    14: 0x4021,  # x^14 + x^5 + 1
    15: 0x8003,  # x^15 + x + 1
    16: 0x1002B,  # x^16 + x^5 + x^3 + x + 1
    17: 0x20009,  # x^17 + x^3 + 1
    18: 0x40009,  # x^18 + x^3 + 1
    19: 0x80027,  # x^19 + x^5 + x^2 + x + 1
    20: 0x100009,  # x^20 + x^3 + 1
    21: 0x200005,  # x^21 + x^2 + 1
    22: 0x400003,  # x^22 + x + 1
    23: 0x800021,  # x^23 + x^5 + 1
    24: 0x100001B,  # x^24 + x^4 + x^3 + x + 1
    25: 0x2000009,  # x^25 + x^3 + 1
    26: 0x400001B,  # x^26 + x^4 + x^3 + x + 1
    27: 0x8000027,  # x^27 + x^5 + x^2 + x + 1
    28: 0x10000003,  # x^28 + x + 1
    29: 0x20000005,  # x^29 + x^2 + 1
    30: 0x40000003,  # x^30 + x + 1
    31: 0x80000009,  # x^31 + x^3 + 1
    32: 0x10000008D,  # x^32 + x^7 + x^3 + x^2 + 1
}

MAX_ELL = 32


def clmul(a, b):
    """Carry-less product of two bit-polynomials."""
    r = 0
    while b:
        if b & 1:
            r ^= a
        a <<= 1
        b >>= 1
    return r


def poly_mod(a, m):
    """Remainder of bit-polynomial a modulo m."""
    dm = m.bit_length() - 1
    while a.bit_length() - 1 >= dm:
        a ^= m << (a.bit_length() - 1 - dm)
    return a


def _has_factor(f):
    # trial division by every polynomial of degree 1 .. deg(f)/2
    deg = f.bit_length() - 1
    for d in range(1, deg // 2 + 1):
        for g in range(1 << d, 1 << (d + 1)):
            if poly_mod(f, g) == 0:
                return True
    return False


@dataclass(frozen=True)
class Gf2mField:
    """GF(2^ell) with elements stored as ell-bit ints, LSB = constant term."""

    ell: int
    reduction_poly: int = None

    def __post_init__(self):
        if not 1 <= self.ell <= MAX_ELL:
            raise ValueError(f"ell must be in [1, {MAX_ELL}], got {self.ell}")
        poly = IRREDUCIBLE[self.ell] if self.reduction_poly is None else self.reduction_poly
        if poly.bit_length() != self.ell + 1:
            raise ValueError(f"reduction polynomial {poly:#x} is not of degree {self.ell}")
        if self.ell <= 16:
            if _has_factor(poly):
                raise ValueError(f"reduction polynomial {poly:#x} is reducible")
        elif poly != IRREDUCIBLE[self.ell]:
            raise ValueError("for ell > 16 only the built-in polynomials are accepted")
        object.__setattr__(self, "reduction_poly", poly)

    @property
    def order(self):
        return 1 << self.ell

    def _check(self, a):
        if not 0 <= a < (1 << self.ell):
            raise ValueError(f"{a} is not an element of GF(2^{self.ell})")
        return a

    def add(self, a, b):
        return self._check(a) ^ self._check(b)

    def mul(self, a, b):
        self._check(a)
        self._check(b)
        top = 1 << self.ell
        poly = self.reduction_poly
        r = 0
        while b:
            if b & 1:
                r ^= a
            b >>= 1
            a <<= 1
            if a & top:
                a ^= poly
        return r

    def pow(self, a, e):
        result = 1
        while e:
            if e & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            e >>= 1
        return result

    def inverse(self, a):
        if a == 0:
            raise ZeroDivisionError("zero has no inverse")
        return self.pow(a, (1 << self.ell) - 2)

    def eval_poly(self, coeffs, x):
        """Horner evaluation; ``coeffs`` are constant term first."""
        acc = 0
        for c in reversed(coeffs):
            acc = self.mul(acc, x) ^ self._check(c)
        return acc

    def element(self, bits):
        return Gf2mElement(self, self._check(bits))

    def mul_table(self):
        size = 1 << self.ell
        return [[self.mul(a, b) for b in range(size)] for a in range(size)]


@dataclass(frozen=True)
class Gf2mElement:
    field: Gf2mField
    bits: int

    def __post_init__(self):
        self.field._check(self.bits)

    def _other(self, other):
        if not isinstance(other, Gf2mElement):
            return NotImplemented
        if other.field != self.field:
            raise FieldMismatchError(
                f"GF(2^{self.field.ell}) element combined with GF(2^{other.field.ell}) element")
        return other.bits

    def __add__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return Gf2mElement(self.field, self.bits ^ b)

    __sub__ = __add__

    def __mul__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return Gf2mElement(self.field, self.field.mul(self.bits, b))

    def __int__(self):
        return self.bits


def gf_add(a, b):
    return a + b


def gf_mul(a, b):
    return a * b


def gf_eval_poly(coeffs, x):
    """Evaluate a polynomial of Gf2mElements (constant term first) at x."""
    for c in coeffs:
        if c.field != x.field:
            raise FieldMismatchError("coefficient and evaluation point lie in different fields")
    return x.field.element(x.field.eval_poly([c.bits for c in coeffs], x.bits))


# Deterministic Miller-Rabin: the first 13 primes as bases are exact for
# every n < 3.3e24 (the first 12 would stop at 3.2e23).
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
_MR_LIMIT = 3317044064679887385961981


def is_prime(v):
    if v < 2:
        return False
    for p in _MR_BASES:
        if v % p == 0:
            return v == p
    if v >= _MR_LIMIT:
        raise ValueError("deterministic primality only implemented below 3.3e24")
    d, s = v - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, v)
        if x in (1, v - 1):
            continue
        for _ in range(s - 1):
            x = x * x % v
            if x == v - 1:
                break
        else:
            return False
    return True


def next_prime(v):
    """Smallest prime >= v."""
    if v <= 2:
        return 2
    v |= 1
    while not is_prime(v):
        v += 2
    return v


def _rho(n):
    # Brent's variant of Pollard rho; n is odd and composite
    for c in range(1, n):
        y, r, q, g = 2, 1, 1, 1
        x = ys = 2
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(128, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += 128
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
    raise ArithmeticError(f"failed to split {n}")


def prime_factors(n):
    """Distinct prime factors of n, ascending."""
    out = set()
    for p in (2, 3, 5, 7, 11, 13):
        while n % p == 0:
            out.add(p)
            n //= p
    stack = [n] if n > 1 else []
    while stack:
        k = stack.pop()
        if is_prime(k):
            out.add(k)
            continue
        f = _rho(k)
        stack += [f, k // f]
    return sorted(out)


def is_primitive_root(g, p):
    return all(pow(g, (p - 1) // r, p) != 1 for r in prime_factors(p - 1))


@lru_cache(maxsize=None)
def find_ntt_prime(min_order, min_value, max_value=1 << 64):
    """Smallest prime p > min_value with min_order | p - 1, and a generator g."""
    if min_order < 1 or min_order & (min_order - 1):
        raise ValueError("min_order must be a power of two")
    if min_order > 1 << 24:
        raise ValueError("min_order above 2^24 is not supported")
    k = min_value // min_order
    if k * min_order + 1 <= min_value:
        k += 1
    while k * min_order + 1 < max_value:
        p = k * min_order + 1
        if p > 2 and is_prime(p):
            g = next(g for g in range(2, p) if is_primitive_root(g, p))
            return p, g
        if p == 2:
            return 2, 1
        k += 1
    raise NoNTTPrimeError(
        f"no prime = 1 mod {min_order} in ({min_value}, {max_value})")


@dataclass(frozen=True)
class PrimeField:
    q: int

    def __post_init__(self):
        if self.q < 3 or not is_prime(self.q):
            raise ValueError(f"{self.q} is not an odd prime")

    def eval_poly(self, coeffs, x):
        acc = 0
        for c in reversed(coeffs):
            acc = (acc * x + c) % self.q
        return acc
