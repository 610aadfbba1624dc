"""Exact integer transforms on reduced (dense) vectors.

Everything here is integer arithmetic: the Walsh-Hadamard path works in
int64 with the magnitude bound checked up front, the cyclic correlation
runs number-theoretic transforms over several 30-bit primes and
recombines the residues.  No floating point is involved anywhere.
"""

from functools import lru_cache

import numpy as np

from .errors import LengthMismatchError, TransformOverflowError
from .fields import find_ntt_prime

INT64_MAX = (1 << 63) - 1
MAX_WHT_LOG = 22
MAX_NTT_LOG = 24


def _ntt_primes():
    # p = k * 2^24 + 1 below 2^31, so residue products fit in uint64
    primes = []
    p = 1 << 27
    while True:
        p, g = find_ntt_prime(1 << MAX_NTT_LOG, p, 1 << 31)
        primes.append((p, g))
        if len(primes) == 8:
            return tuple(primes)


NTT_PRIMES = _ntt_primes()


def _log2_exact(n):
    if n < 1 or n & (n - 1):
        raise LengthMismatchError(f"length {n} is not a power of two")
    return n.bit_length() - 1


def fwht_in_place(v):
    """Unnormalised Walsh-Hadamard transform along the last axis.

    ``v`` must be a C-contiguous int64 array; it is overwritten and
    returned.  Raises TransformOverflowError if the result could leave the
    signed 64-bit range.
    """
    n = v.shape[-1]
    k = _log2_exact(n)
    if k > MAX_WHT_LOG:
        raise LengthMismatchError(f"length 2^{k} exceeds 2^{MAX_WHT_LOG}")
    if v.dtype != np.int64 or not v.flags.c_contiguous:
        raise TypeError("fwht_in_place needs a C-contiguous int64 array")
    if v.size and (int(np.abs(v).max()) << k) > INT64_MAX:
        raise TransformOverflowError("Walsh-Hadamard result may exceed 63 bits")
    h = 1
    while h < n:
        w = v.reshape(v.shape[:-1] + (n // (2 * h), 2, h))
        lo = w[..., 0, :].copy()
        hi = w[..., 1, :]
        w[..., 0, :] += hi
        w[..., 1, :] = lo - hi
        h *= 2
    return v


def fwht(v):
    return fwht_in_place(np.array(v, dtype=np.int64))


def _l1(v):
    return int(np.abs(v).sum(axis=-1).max()) if v.size else 0


def xor_correlate(a, b):
    """out[k] = sum_i a[i ^ k] * b[i], batched over leading axes."""
    a = np.array(a, dtype=np.int64)
    b = np.array(b, dtype=np.int64)
    n = a.shape[-1]
    if b.shape[-1] != n:
        raise LengthMismatchError(f"lengths {n} and {b.shape[-1]} differ")
    _log2_exact(n)
    if n * _l1(a) * _l1(b) > INT64_MAX:
        raise TransformOverflowError("XOR correlation may exceed 63 bits")
    fa = fwht_in_place(a)
    fb = fwht_in_place(b)
    out = fwht_in_place(np.ascontiguousarray(fa * fb))
    if np.any(out % n):
        raise ArithmeticError("inverse Walsh-Hadamard division was not exact")
    return out // n


@lru_cache(maxsize=64)
def _bitrev(n):
    k = n.bit_length() - 1
    rev = np.zeros(n, dtype=np.int64)
    for b in range(k):
        rev |= ((np.arange(n) >> b) & 1) << (k - 1 - b)
    return rev


def _powers(root, count, p):
    out = np.ones(count, dtype=np.uint64)
    filled = 1
    step = root
    while filled < count:
        take = min(filled, count - filled)
        out[filled:filled + take] = out[:take] * np.uint64(step) % np.uint64(p)
        filled += take
        step = step * step % p
    return out


@lru_cache(maxsize=64)
def _twiddles(n, p, g, invert):
    stages = []
    length = 2
    while length <= n:
        root = pow(g, (p - 1) // length, p)
        if invert:
            root = pow(root, p - 2, p)
        stages.append(_powers(root, length // 2, p))
        length *= 2
    return tuple(stages)


def _ntt(a, p, g, invert=False):
    n = len(a)
    if n > 1 << MAX_NTT_LOG:
        raise LengthMismatchError(f"NTT length {n} exceeds 2^{MAX_NTT_LOG}")
    pp = np.uint64(p)
    a = np.asarray(a, dtype=np.uint64)[_bitrev(n)]
    length = 2
    for w in _twiddles(n, p, g, invert):
        half = length // 2
        blocks = a.reshape(-1, length)
        u = blocks[:, :half].copy()
        v = blocks[:, half:] * w % pp
        blocks[:, :half] = (u + v) % pp
        blocks[:, half:] = (u + pp - v) % pp
        length *= 2
    if invert:
        a = a * np.uint64(pow(n, p - 2, p)) % pp
    return a


def ntt_forward(v, prime=NTT_PRIMES[0]):
    """Forward NTT of a power-of-two length vector with entries in [0, p)."""
    _log2_exact(len(v))
    return _ntt(v, *prime)


def ntt_inverse(v, prime=NTT_PRIMES[0]):
    _log2_exact(len(v))
    return _ntt(v, *prime, invert=True)


def _crt(residues, primes, bound):
    """Garner recombination of per-prime residue vectors into exact values."""
    if len(residues) == 1:
        return residues[0].astype(np.int64)
    if bound <= INT64_MAX and len(residues) == 2:
        (p0, _), (p1, _) = primes
        r0 = residues[0].astype(np.int64)
        r1 = residues[1].astype(np.int64)
        inv = pow(p0, p1 - 2, p1)
        t = (r1 - r0) % p1 * inv % p1
        return r0 + p0 * t
    out = residues[0].astype(object)
    modulus = primes[0][0]
    for (p, _), r in zip(primes[1:], residues[1:]):
        inv = pow(modulus, p - 2, p)
        t = ((r.astype(object) - out) % p) * inv % p
        out = out + modulus * t
        modulus *= p
    return out if bound > INT64_MAX else out.astype(np.int64)


def cyclic_correlate(a, b, q=None):
    """out[s] = sum_j a[(s + j) % q] * b[j] for nonnegative integer vectors.

    Computed exactly as a zero-padded linear convolution of ``a`` with the
    cyclically reversed ``b`` and folded back to length q.  As many NTT
    primes are used as the worst-case output bound requires.  The result
    is int64 when the bound allows, else an object array of Python ints.
    """
    a = np.asarray(a)
    b = np.asarray(b)
    q = len(a) if q is None else q
    if len(a) != q or len(b) != q:
        raise LengthMismatchError(f"both vectors must have length {q}")
    if q == 0:
        return np.zeros(0, dtype=np.int64)
    if (a < 0).any() or (b < 0).any():
        raise ValueError("cyclic_correlate expects nonnegative entries")
    amax, bmax = int(a.max()), int(b.max())
    bound = min(int(a.sum(dtype=object)) * bmax, amax * int(b.sum(dtype=object)))
    primes = []
    modulus = 1
    for prime in NTT_PRIMES:
        if modulus > bound and primes:
            break
        primes.append(prime)
        modulus *= prime[0]
    if modulus <= bound:
        raise TransformOverflowError("cyclic correlation exceeds the multi-prime range")

    size = 1 << (2 * q - 1).bit_length() if q > 1 else 1
    brev = np.concatenate([b[:1], b[1:][::-1]])
    residues = []
    for p, g in primes:
        fa = np.zeros(size, dtype=np.uint64)
        fb = np.zeros(size, dtype=np.uint64)
        fa[:q] = np.asarray(a % p, dtype=np.uint64)
        fb[:q] = np.asarray(brev % p, dtype=np.uint64)
        prod = _ntt(fa, p, g) * _ntt(fb, p, g) % np.uint64(p)
        lin = _ntt(prod, p, g, invert=True)
        folded = lin[:q].copy()
        folded[:q - 1] = (folded[:q - 1] + lin[q:2 * q - 1]) % np.uint64(p)
        residues.append(folded)
    return _crt(residues, primes, bound)

