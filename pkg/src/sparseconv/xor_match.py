"""Sparse XOR (Walsh) matching by polynomial length reduction over GF(2^l).

An index i < 2^L is cut into l-bit blocks, read as the coefficients of a
polynomial over GF(2^l) and evaluated at a random point r.  The map is
F_2-linear, hash(i ^ j) == hash(i) ^ hash(j), so XOR alignments survive
the reduction and a dense Walsh-Hadamard correlation of length 2^l does
the work of the length 2^L one.

Each round reduces text and pattern with a fresh r, correlates bucket
counts, and for every bucket that could hold a match splits the mass by
each bit of the original output index.  A bucket whose pairs all agree on
every bit names its output index directly; that candidate is verified
exactly.  A round with no disagreeing bucket is proof that nothing was
missed.  After ``max_rounds`` unproductive rounds the matcher falls back
to verifying every candidate t ^ p0.

The older mask-halving reducer is kept as ``mask_halving_reduce`` /
``mask_consistency_check``; it halves the domain once with a random mask
and tracks whether each nonzero stayed ("s") or moved ("m").
"""

from dataclasses import dataclass
from enum import IntEnum

import numpy as np

from .core import Family, MatchResult, SparseBinaryVector, check_instance, verify_candidates
from .errors import ReductionTooLargeError
from .fields import Gf2mField
from .transforms import xor_correlate

MAX_REDUCED_LOG = 22


class Occupancy(IntEnum):
    EMPTY = 0
    SINGLETON = 1
    MULTIPLE = 2


class BitVerdict(IntEnum):
    ALL_ZERO = 0
    ALL_ONE = 1
    MIXED = 2


@dataclass(frozen=True)
class XorReductionParams:
    L: int
    field: Gf2mField
    r: int

    @property
    def ell(self):
        return self.field.ell

    @property
    def degree(self):
        return -(-self.L // self.ell) - 1

    @property
    def size(self):
        return 1 << self.ell

    @classmethod
    def choose(cls, N, n, m, oversize_factor=8, r=0):
        """Smallest l with 2^l >= max(4, oversize_factor * (n + m))."""
        if N < 2 or N & (N - 1):
            raise ValueError(f"XOR domain must be a power of two >= 2, got {N}")
        if oversize_factor < 2:
            raise ValueError("oversize_factor must be at least 2")
        target = max(4, oversize_factor * (n + m))
        ell = max(2, (target - 1).bit_length())
        if ell > MAX_REDUCED_LOG:
            raise ReductionTooLargeError(
                f"reduced length 2^{ell} exceeds 2^{MAX_REDUCED_LOG}")
        return cls(N.bit_length() - 1, Gf2mField(ell), r)

    def with_point(self, r):
        return XorReductionParams(self.L, self.field, r)


@dataclass(frozen=True)
class Gf2IndexPolynomial:
    coeffs: tuple
    ell: int

    def index(self):
        return sum(c << (k * self.ell) for k, c in enumerate(self.coeffs))


def encode_index_gf2(i, field, L):
    """Split i into l-bit blocks, least significant block first."""
    if not 0 <= i < (1 << L):
        raise ValueError(f"index {i} out of range for L={L}")
    ell = field.ell
    blocks = max(1, -(-L // ell))
    mask = (1 << ell) - 1
    return Gf2IndexPolynomial(tuple((i >> (k * ell)) & mask for k in range(blocks)), ell)


def hash_index(i, params):
    poly = encode_index_gf2(i, params.field, params.L)
    return params.field.eval_poly(poly.coeffs, params.r)


def hash_indices(indices, params):
    """Vectorised hash_index.

    By linearity the hash is the XOR of the hashes of the set bits, so one
    table of L basis images replaces per-index Horner evaluation.
    """
    basis = [hash_index(1 << b, params) for b in range(params.L)]
    idx = np.asarray(indices)
    out = np.zeros(len(idx), dtype=np.int64)
    if idx.dtype == object:
        for k, i in enumerate(idx):
            h = 0
            for b in range(params.L):
                if (i >> b) & 1:
                    h ^= basis[b]
            out[k] = h
        return out
    for b, h in enumerate(basis):
        if h:
            out ^= ((idx >> b) & 1) * h
    return out


@dataclass(frozen=True, eq=False)
class ReducedXorVector:
    params: XorReductionParams
    sources: np.ndarray
    buckets: np.ndarray
    counts: np.ndarray
    xor_of_indices: np.ndarray
    representative: np.ndarray

    @property
    def occupancy(self):
        return np.minimum(self.counts, 2).astype(np.int8)

    def bucket(self, k):
        return Occupancy(min(int(self.counts[k]), 2))


def reduce_xor(v, params):
    """Bucket every nonzero of v by hash_index under ``params``."""
    if v.domain_size != 1 << params.L:
        raise ValueError("vector domain does not match the reduction parameters")
    src = v.array
    buckets = hash_indices(src, params)
    size = params.size
    counts = np.bincount(buckets, minlength=size).astype(np.int64)
    xors = np.zeros(size, dtype=src.dtype if src.dtype == object else np.int64)
    rep = np.full(size, -1, dtype=xors.dtype)
    if len(src):
        np.bitwise_xor.at(xors, buckets, src)
        rep[buckets] = src
    return ReducedXorVector(params, src, buckets, counts, xors, rep)


def _split_by_bit(red, b):
    size = red.params.size
    bit = ((red.sources >> b) & 1).astype(bool)
    one = np.bincount(red.buckets[bit], minlength=size).astype(np.int64)
    return red.counts - one, one


def _bit_ones(tred, pred, bits):
    """ones[b, k]: contributing pairs at bucket k whose output index has bit b set."""
    t0, t1 = zip(*(_split_by_bit(tred, b) for b in bits))
    p0, p1 = zip(*(_split_by_bit(pred, b) for b in bits))
    return xor_correlate(np.array(t0), np.array(p1)) + xor_correlate(np.array(t1), np.array(p0))


@dataclass(frozen=True, eq=False)
class BitPass:
    bit: int
    verdict: np.ndarray
    ones: np.ndarray
    total: np.ndarray


def bit_consistency_pass(tred, pred, b):
    """Classify every bucket by bit b of the output indices contributing to it."""
    if tred.params != pred.params:
        raise ValueError("reduced vectors use different parameters")
    total = xor_correlate(tred.counts, pred.counts)
    ones = _bit_ones(tred, pred, [b])[0]
    verdict = np.full(len(total), BitVerdict.MIXED, dtype=np.int8)
    verdict[ones == 0] = BitVerdict.ALL_ZERO
    verdict[(ones == total) & (total > 0)] = BitVerdict.ALL_ONE
    return BitPass(b, verdict, ones, total)


@dataclass(frozen=True)
class RoundOutcome:
    verified: tuple
    clean: bool
    candidates_checked: int
    mixed_buckets: int


def run_xor_round(text, pattern, params):
    """One reduce / correlate / verify / expand pass at evaluation point params.r."""
    m = len(pattern)
    tred = reduce_xor(text, params)
    pred = reduce_xor(pattern, params)
    total = xor_correlate(tred.counts, pred.counts)
    hot = np.flatnonzero(total >= m)
    if not len(hot):
        return RoundOutcome((), True, 0, 0)
    ones = _bit_ones(tred, pred, range(params.L))[:, hot]
    tot = total[hot]
    mixed = ((ones != 0) & (ones != tot)).any(axis=0)
    settled = (ones[:, ~mixed] == tot[~mixed])
    if params.L > 62:
        weights = np.array([1 << b for b in range(params.L)], dtype=object)
        cand = (settled.astype(object) * weights[:, None]).sum(axis=0)
    else:
        cand = (settled.astype(np.int64) << np.arange(params.L)[:, None]).sum(axis=0)
    found, checked = verify_candidates(Family.XOR, text, pattern, cand)
    return RoundOutcome(tuple(sorted(int(w) for w in found)), not mixed.any(), checked,
                        int(mixed.sum()))


def sparse_match_xor(text, pattern, oversize_factor=8, max_rounds=4, seed=0):
    """All XOR matches of pattern in text; always equal to the brute-force answer."""
    check_instance(Family.XOR, text, pattern)
    p0 = pattern.support[0]
    if len(pattern) == 1:
        return MatchResult(sorted(t ^ p0 for t in text.support), counts_checked=len(text))
    base = XorReductionParams.choose(text.domain_size, len(text), len(pattern), oversize_factor)
    rng = np.random.default_rng(seed)
    found = set()
    checked = 0
    for rnd in range(1, max_rounds + 1):
        params = base.with_point(int(rng.integers(0, base.size)))
        outcome = run_xor_round(text, pattern, params)
        found.update(outcome.verified)
        checked += outcome.candidates_checked
        if outcome.clean:
            return MatchResult(sorted(found), counts_checked=checked, rounds_used=rnd)
    cand = text.array ^ p0
    rest, extra = verify_candidates(Family.XOR, text, pattern, cand)
    found.update(int(w) for w in rest)
    return MatchResult(sorted(found), counts_checked=checked + extra,
                       rounds_used=max_rounds, fallback=True)


# -- mask halving ---------------------------------------------------------

class MaskVerdict(IntEnum):
    ZERO = 0
    SS_MM = 1
    MS = 2
    INCONSISTENT = 3


@dataclass(frozen=True)
class MaskReduction:
    mask: int
    low: SparseBinaryVector
    high: SparseBinaryVector
    merged: SparseBinaryVector
    labels: tuple
    collisions: tuple = ()

    @property
    def collided(self):
        return bool(self.collisions)

    def label_vectors(self):
        half = self.merged.domain_size
        s = np.zeros(half, dtype=np.int64)
        m = np.zeros(half, dtype=np.int64)
        for k, lab in zip(self.merged.support, self.labels):
            (s if lab == "s" else m)[k] = 1
        for k in self.collisions:
            s[k] = m[k] = 1
        return s, m


def _halve(v, mask):
    half = v.domain_size // 2
    low = [i for i in v.support if i < half]
    high = [i - half for i in v.support if i >= half]
    moved = {(i + half) ^ mask: i for i in high}
    lowset = set(low)
    collisions = tuple(sorted(lowset & set(moved)))
    merged = sorted(lowset | set(moved))
    labels = tuple("s" if k in lowset else "m" for k in merged)
    return MaskReduction(mask, SparseBinaryVector(half, tuple(low)),
                         SparseBinaryVector(half, tuple(high)),
                         SparseBinaryVector(half, tuple(merged)), labels, collisions)


def mask_halving_reduce(text, pattern, mask):
    """Fold the upper half of each vector onto the lower half through ``mask``.

    ``mask`` has L bits with the top bit set, so upper-half index i lands
    on i ^ mask in the lower half.  Returns one MaskReduction per input;
    check ``collided`` before use.
    """
    N = text.domain_size
    if N != pattern.domain_size or N < 2 or N & (N - 1):
        raise ValueError("mask halving needs equal power-of-two domains")
    L = N.bit_length() - 1
    if not (mask >> (L - 1)) & 1 or mask >= N:
        raise ValueError(f"mask must be an L-bit word with its top bit set (L={L})")
    return _halve(text, mask), _halve(pattern, mask)


@dataclass(frozen=True, eq=False)
class MaskCheck:
    mask: int
    verdict: np.ndarray
    same: np.ndarray
    cross: np.ndarray

    def expanded(self):
        """Original output index -> contributing pair count, for every nonzero mass."""
        out = {}
        for k in np.flatnonzero(self.same):
            out[int(k)] = int(self.same[k])
        for k in np.flatnonzero(self.cross):
            out[int(k) ^ self.mask] = int(self.cross[k])
        return out


def mask_consistency_check(tred, pred):
    """Split the reduced correlation into s*s + m*m mass and s*m + m*s mass.

    Same-origin mass at k belongs to original index k; cross mass belongs
    to k ^ mask.  A location carrying both kinds is INCONSISTENT: it mixes
    two different original indices.
    """
    if tred.mask != pred.mask:
        raise ValueError("reductions were built with different masks")
    ts, tm = tred.label_vectors()
    ps, pm = pred.label_vectors()
    same = xor_correlate(ts, ps) + xor_correlate(tm, pm)
    cross = xor_correlate(tm, ps) + xor_correlate(ts, pm)
    verdict = np.full(len(same), MaskVerdict.INCONSISTENT, dtype=np.int8)
    verdict[(same == 0) & (cross == 0)] = MaskVerdict.ZERO
    verdict[(same > 0) & (cross == 0)] = MaskVerdict.SS_MM
    verdict[(same == 0) & (cross > 0)] = MaskVerdict.MS
    return MaskCheck(tred.mask, verdict, same, cross)


def mask_match_xor(text, pattern, seed=0, retries=None):
    """XOR matching through one mask-halving step.

    Returns None when every tried mask produced an origin collision; the
    caller should then use sparse_match_xor.
    """
    check_instance(Family.XOR, text, pattern)
    N = text.domain_size
    L = N.bit_length() - 1
    if L < 1:
        return None
    rng = np.random.default_rng(seed)
    m = len(pattern)
    for attempt in range(1, (retries or 2 * L) + 1):
        mask = (1 << (L - 1)) | int(rng.integers(0, 1 << (L - 1)))
        tred, pred = mask_halving_reduce(text, pattern, mask)
        if tred.collided or pred.collided:
            continue
        full = [w for w, mass in mask_consistency_check(tred, pred).expanded().items()
                if mass == m]
        return MatchResult(sorted(full), counts_checked=len(full), rounds_used=attempt)
    return None
