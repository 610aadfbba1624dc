"""Sparse shift matching by polynomial length reduction over F_q.

An index is written in base B = (q - 1) / 2 and its digits read as the
coefficients of a degree-c polynomial.  Adding two base-B digit vectors
without carrying gives one of 2^c "variants" of the sum's digits: digit
k may carry +B while digit k + 1 gives back 1.  The text therefore
contributes every variant of every nonzero and the pattern contributes
its plain digits; evaluating all of them at one point a of F_q maps both
vectors to length q while keeping every true alignment aligned.

Two matchers are built on this.  The Las Vegas one draws fresh points,
correlates the reduced vectors, reconstructs candidate positions from
shifts whose buckets are all singletons and verifies them exactly.  The
deterministic one uses assignment points chosen ahead of time by table
halving so that every text polynomial is a singleton under at least one
of them, filters candidate positions by the reduced counts and verifies
the survivors.

Domains too long for a degree-8 encoding are first folded modulo a prime
that keeps every text index distinct (see ``primesearch``).
"""

import hashlib
import struct
from dataclasses import dataclass, field

import numpy as np

from .core import INT64_LIMIT, Family, MatchResult, SparseBinaryVector, check_instance, \
    verify_candidates
from .errors import AssignmentPoolExhaustedError, DomainTooLargeError, StaleTableError
from .fields import PrimeField, is_prime, next_prime
from .instances import format_sparse
from .primesearch import exp_prime_search
from .transforms import cyclic_correlate

MAX_DEGREE = 8


@dataclass(frozen=True)
class ShiftReductionParams:
    q: int
    c: int
    a: int = None

    def __post_init__(self):
        PrimeField(self.q)
        if self.digit_base < 2:
            raise ValueError(f"q={self.q} gives digit base below 2")
        if self.c < 0:
            raise ValueError("degree bound must be nonnegative")

    @property
    def digit_base(self):
        return (self.q - 1) // 2

    @property
    def capacity(self):
        """Indices below this bound are encodable."""
        return self.digit_base ** (self.c + 1)

    def with_assignment(self, a):
        return ShiftReductionParams(self.q, self.c, a)


def assignment_pool_size(c, n):
    return c * 2 ** (c + 1) * n


def choose_params(N, n, deterministic=False, q=None, min_q=5):
    """Pick (q, c): q prime >= max(4n, pool + 1), c smallest with B^(c+1) > N.

    With ``deterministic`` the prime must exceed the c * 2^(c+1) * n
    assignment candidates used by the selection table.  A fixed ``q`` may
    be passed; then only c is searched.
    """
    if n < 1:
        raise ValueError("need at least one text nonzero")
    for c in range(1, MAX_DEGREE + 1):
        if q is None:
            pool = assignment_pool_size(c, n) if deterministic else 0
            qq = next_prime(max(4 * n, pool + 1, min_q))
        else:
            qq = q
        params = ShiftReductionParams(qq, c)
        if params.capacity > N:
            if deterministic and qq <= assignment_pool_size(c, n):
                raise AssignmentPoolExhaustedError(
                    f"q={qq} cannot host {assignment_pool_size(c, n)} assignments")
            return params
    raise DomainTooLargeError(
        f"N={N} needs degree above {MAX_DEGREE} for n={n}; fold it with exp_prime_search")


def _params_for(N, n, deterministic=False):
    # like choose_params, but raises q instead of failing on short inputs
    try:
        return choose_params(N, n, deterministic)
    except DomainTooLargeError:
        root = int(round(N ** (1.0 / (MAX_DEGREE + 1)))) + 2
        return choose_params(N, n, deterministic, min_q=2 * root + 1)


@dataclass(frozen=True)
class FqIndexPolynomial:
    digits: tuple
    q: int
    is_base: bool = True
    source: int = None

    def lifted(self):
        """Digits as integers in [-1, q - 2] (residue q - 1 means -1)."""
        return tuple(d - self.q if d == self.q - 1 else d for d in self.digits)

    def value(self):
        """Read the lifted digits in base (q - 1) / 2."""
        B = (self.q - 1) // 2
        return sum(d * B ** k for k, d in enumerate(self.lifted()))

    def evaluate(self, a):
        return PrimeField(self.q).eval_poly(self.digits, a)


@dataclass(frozen=True)
class VariantSet:
    source: int
    polys: tuple

    def __len__(self):
        return len(self.polys)


def encode_index_fq(i, params):
    """Base form: digits of i in base (q - 1) / 2, constant term first."""
    B = params.digit_base
    if not 0 <= i < params.capacity:
        raise ValueError(f"index {i} not encodable with q={params.q}, c={params.c}")
    digits = []
    rest = i
    for _ in range(params.c + 1):
        rest, d = divmod(rest, B)
        digits.append(d)
    return FqIndexPolynomial(tuple(digits), params.q, True, source=i)


def expand_variants(base):
    """All 2^c carry variants of a base polynomial.

    Subset bit k adds B to digit k and takes 1 from digit k + 1, for k in
    0 .. c - 1.  Members are ordered by subset bitmask, base first.
    """
    q = base.q
    B = (q - 1) // 2
    c = len(base.digits) - 1
    polys = []
    for mask in range(1 << c):
        d = list(base.digits)
        for k in range(c):
            if mask >> k & 1:
                d[k] += B
                d[k + 1] -= 1
        polys.append(FqIndexPolynomial(tuple(x % q for x in d), q, mask == 0, base.source))
    return VariantSet(base.source, tuple(polys))


@dataclass(frozen=True, eq=False)
class ReducedShiftVector:
    q: int
    buckets: np.ndarray
    sources: np.ndarray
    counts: np.ndarray
    index_sums: np.ndarray

    @property
    def occupancy(self):
        return np.minimum(self.counts, 2).astype(np.int8)

    def singleton_sources(self):
        """Bucket -> source index where the bucket holds exactly one mark."""
        single = self.counts[self.buckets] == 1
        return dict(zip(self.buckets[single].tolist(), self.sources[single].tolist()))


def evaluate_mapping(polys, a):
    """Evaluate each polynomial at a (mod q) and bucket the results."""
    polys = list(polys)
    if not polys:
        raise ValueError("nothing to evaluate")
    q = polys[0].q
    if not 0 <= a < q:
        raise ValueError(f"assignment {a} outside F_{q}")
    buckets = np.array([p.evaluate(a) for p in polys], dtype=np.int64)
    sources = np.array([p.source for p in polys], dtype=object)
    return _reduced(q, buckets, sources)


def _reduced(q, buckets, sources):
    counts = np.bincount(buckets, minlength=q).astype(np.int64)
    sums = np.zeros(q, dtype=object)
    np.add.at(sums, buckets, sources.astype(object))
    return ReducedShiftVector(q, buckets, sources, counts, sums)


# -- vectorised evaluation ------------------------------------------------

def _digits(indices, params):
    B = params.digit_base
    idx = np.asarray(indices, dtype=np.int64)
    out = np.empty((len(idx), params.c + 1), dtype=np.int64)
    for k in range(params.c + 1):
        idx, out[:, k] = np.divmod(idx, B)
    return out


def _powers(a, params):
    return np.array([pow(a, k, params.q) for k in range(params.c + 1)], dtype=np.int64)


def _base_evals(digits, a, params):
    return (digits * _powers(a, params)).sum(axis=1) % params.q


def _variant_offsets(a, params):
    # variant with subset S evaluates to base + sum_{k in S} a^k (B - a)
    q, B = params.q, params.digit_base
    step = [pow(a, k, q) * (B - a) % q for k in range(params.c)]
    return np.array([sum(s for k, s in enumerate(step) if mask >> k & 1) % q
                     for mask in range(1 << params.c)], dtype=np.int64)


def _text_marks(text_digits, a, params):
    base = _base_evals(text_digits, a, params)
    return ((base[:, None] + _variant_offsets(a, params)[None, :]) % params.q).reshape(-1)


def _correlate_at(vec, pat, positions):
    """cyclic_correlate(vec, pat)[positions], summed directly when that is cheaper."""
    q = len(vec)
    nz = np.flatnonzero(pat)
    if len(positions) * len(nz) > 4 * q:
        return cyclic_correlate(vec, pat)[positions]
    cols = (positions[:, None] + nz[None, :]) % q
    terms = vec[cols].astype(object) if vec.dtype == object else vec[cols]
    return (terms * pat[nz]).sum(axis=1)


# -- Las Vegas matcher ----------------------------------------------------

@dataclass(frozen=True)
class ShiftRoundOutcome:
    verified: tuple
    clean: bool
    candidates_checked: int
    deferred: int
    counts: np.ndarray = field(default=None, repr=False, compare=False)


def run_shift_round(text, pattern, params, text_digits=None, pattern_digits=None):
    """One reduction/correlation/verification pass at assignment params.a."""
    q, a, m = params.q, params.a, len(pattern)
    if text_digits is None:
        text_digits = _digits(text.array, params)
    if pattern_digits is None:
        pattern_digits = _digits(pattern.array, params)
    marks = _text_marks(text_digits, a, params)
    occupancy = np.bincount(marks, minlength=q).astype(np.int64)
    pat = np.bincount(_base_evals(pattern_digits, a, params), minlength=q).astype(np.int64)
    counts = cyclic_correlate(occupancy, pat)
    hot = np.flatnonzero(counts >= m)
    if not len(hot):
        return ShiftRoundOutcome((), True, 0, 0, counts)

    multiple = _correlate_at((occupancy >= 2).astype(np.int64), pat, hot)
    pure = hot[multiple == 0]
    deferred = len(hot) - len(pure)
    cand = np.zeros(0, dtype=np.int64)
    if len(pure):
        sources = np.repeat(text.array, 1 << params.c)
        single = occupancy[marks] == 1
        weights = np.zeros(q, dtype=np.int64)
        weights[marks[single]] = sources[single]
        # all hit buckets are singletons: sum of sources = m * i + sum(pattern)
        offset = _correlate_at(weights, pat, pure) - sum(pattern.support)
        cand = np.array([o // m for o in offset.tolist() if o % m == 0], dtype=np.int64)
    found, checked = verify_candidates(Family.SHIFT, text, pattern, cand)
    return ShiftRoundOutcome(tuple(int(i) for i in found), deferred == 0, checked, deferred,
                             counts)


def _fallback(text, pattern, filters=()):
    """Verify every t - p0, after dropping those some round already ruled out.

    ``filters`` holds (params, counts) per finished round.  A true match i
    has counts[base(i)(a)] >= m under every assignment, so the filter
    never loses one.
    """
    cand = text.array - pattern.support[0]
    cand = cand[(cand >= 0) & (cand <= text.domain_size - pattern.domain_size)]
    if filters and len(cand):
        cdig = _digits(cand, filters[0][0])
        for params, counts in filters:
            keep = counts[_base_evals(cdig, params.a, params)] >= len(pattern)
            cand, cdig = cand[keep], cdig[keep]
    return verify_candidates(Family.SHIFT, text, pattern, cand)


def _needs_folding(N, n, prime_bits):
    if N > INT64_LIMIT:
        return True
    try:
        choose_params(N, n)
        return False
    except DomainTooLargeError:
        return N > 1 << (prime_bits + 2)


def sparse_match_shift_lasvegas(text, pattern, seed=0, max_rounds=4,
                                prime_count=4096, prime_bits=20):
    """All shift matches of pattern in text; always equal to the brute-force answer."""
    check_instance(Family.SHIFT, text, pattern)
    if len(pattern) == 1:
        found, checked = _fallback(text, pattern)
        return MatchResult(found.tolist(), counts_checked=checked)
    if _needs_folding(text.domain_size, len(text), prime_bits):
        return _folded_match(text, pattern, seed, max_rounds, prime_count, prime_bits)
    params = _params_for(text.domain_size, len(text))
    tdig = _digits(text.array, params)
    pdig = _digits(pattern.array, params)
    rng = np.random.default_rng(seed)
    found, checked = set(), 0
    filters = []
    for rnd in range(1, max_rounds + 1):
        at = params.with_assignment(int(rng.integers(params.q)))
        outcome = run_shift_round(text, pattern, at, tdig, pdig)
        found.update(outcome.verified)
        checked += outcome.candidates_checked
        if outcome.clean:
            return MatchResult(sorted(found), counts_checked=checked, rounds_used=rnd)
        filters.append((at, outcome.counts))
    rest, extra = _fallback(text, pattern, filters)
    found.update(int(i) for i in rest)
    return MatchResult(sorted(found), counts_checked=checked + extra,
                       rounds_used=max_rounds, fallback=True)


def fold_instance(text, pattern, p):
    """Fold both vectors modulo p into a linear instance of length 2p.

    Text residues are written twice (r and r + p) so that every cyclic
    alignment mod p becomes a linear one.  Every true match i reappears
    as a match at i mod p.
    """
    tres = sorted({t % p for t in text.support})
    folded_text = SparseBinaryVector(2 * p, tuple(tres + [r + p for r in tres]))
    pres = sorted({j % p for j in pattern.support})
    folded_pattern = SparseBinaryVector(max(pres) + 1, tuple(pres))
    return folded_text, folded_pattern


def _folded_match(text, pattern, seed, max_rounds, prime_count, prime_bits):
    p = exp_prime_search(text.support, prime_count, prime_bits)
    ftext, fpat = fold_instance(text, pattern, p)
    inner = sparse_match_shift_lasvegas(ftext, fpat, seed, max_rounds)
    by_residue = {t % p: t for t in text.support}
    p0 = pattern.support[0]
    cand = [by_residue[(i + p0) % p] - p0 for i in inner.positions
            if i < p and (i + p0) % p in by_residue]
    found, checked = verify_candidates(Family.SHIFT, text, pattern, cand)
    return MatchResult(found.tolist(), counts_checked=inner.counts_checked + checked,
                       rounds_used=inner.rounds_used, fallback=inner.fallback)


# -- deterministic matcher ------------------------------------------------

def text_fingerprint(text):
    """64-bit content hash of the vector's canonical ``.sv`` serialisation."""
    digest = hashlib.blake2b(format_sparse(text).encode(), digest_size=8).digest()
    return int.from_bytes(digest, "little")


@dataclass(frozen=True, eq=False)
class AssignmentTable:
    q: int
    c: int
    fingerprint: int
    selected: tuple
    rows: tuple = ()
    singletons: np.ndarray = field(default=None, repr=False)

    @property
    def params(self):
        return ShiftReductionParams(self.q, self.c)


def singleton_matrix(text, params, assignments):
    """rows x columns booleans: text polynomial (column) is alone in its bucket."""
    digits = _digits(text.array, params)
    out = np.empty((len(assignments), len(text) << params.c), dtype=bool)
    for r, a in enumerate(assignments):
        marks = _text_marks(digits, a, params)
        out[r] = np.bincount(marks, minlength=params.q)[marks] == 1
    return out


def preprocess_select_assignments(text, params=None):
    """Choose O(log n) assignments under which every text polynomial is a singleton once.

    Rows are the first c * 2^(c+1) * n values of F_q.  Every column is set
    in at least half the rows, so some row covers at least half of the
    surviving columns; it is taken (ties go to the smaller value), its
    columns are dropped, and the step repeats.
    """
    if not len(text):
        raise ValueError("text has no nonzeros")
    if params is None:
        params = _params_for(text.domain_size, len(text), deterministic=True)
    if params.capacity <= text.support[-1]:
        raise ValueError("parameters cannot encode the text indices")
    pool = assignment_pool_size(params.c, len(text))
    if params.q <= pool:
        raise AssignmentPoolExhaustedError(f"q={params.q} cannot host {pool} assignments")
    rows = tuple(range(pool))
    table = singleton_matrix(text, params, rows)
    per_column = table.sum(axis=0)
    if (2 * per_column < len(rows)).any():
        raise AssertionError("a text polynomial is a singleton in fewer than half the rows")
    alive = np.ones(table.shape[1], dtype=bool)
    selected = []
    while alive.any():
        cover = table[:, alive].sum(axis=1)
        best = int(np.argmax(cover))
        if 2 * cover[best] < alive.sum():
            raise AssertionError("no row covers half of the remaining columns")
        selected.append(rows[best])
        alive &= ~table[best]
    return AssignmentTable(params.q, params.c, text_fingerprint(text), tuple(selected),
                           rows, table)


def sparse_match_shift_deterministic(text, pattern, table):
    """Shift matches using preselected assignments; no randomness."""
    check_instance(Family.SHIFT, text, pattern)
    if table.fingerprint != text_fingerprint(text):
        raise StaleTableError("assignment table was built for a different text")
    params = table.params
    if params.capacity <= text.domain_size - 1:
        raise StaleTableError("table parameters cannot encode this text domain")
    m = len(pattern)
    p0 = pattern.support[0]
    cand = text.array - p0
    cand = cand[(cand >= 0) & (cand <= text.domain_size - pattern.domain_size)]
    tdig = _digits(text.array, params)
    pdig = _digits(pattern.array, params)
    cdig = _digits(cand, params)
    for a in table.selected:
        occupancy = np.bincount(_text_marks(tdig, a, params), minlength=params.q)
        pat = np.bincount(_base_evals(pdig, a, params), minlength=params.q)
        counts = cyclic_correlate(occupancy, pat)
        keep = counts[_base_evals(cdig, a, params)] >= m
        cand, cdig = cand[keep], cdig[keep]
        if not len(cand):
            break
    found, checked = verify_candidates(Family.SHIFT, text, pattern, cand)
    return MatchResult(found.tolist(), counts_checked=checked, rounds_used=len(table.selected))


# -- table persistence ----------------------------------------------------

TABLE_MAGIC = b"LRAT"
TABLE_VERSION = 1
_HEADER = struct.Struct("<4sHQIQI")


def save_table(table, path):
    """Write magic, version, q, c, fingerprint, count and assignments (little-endian)."""
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(TABLE_MAGIC, TABLE_VERSION, table.q, table.c,
                              table.fingerprint, len(table.selected)))
        fh.write(struct.pack(f"<{len(table.selected)}Q", *table.selected))


def load_table(path):
    with open(path, "rb") as fh:
        data = fh.read()
    if len(data) < _HEADER.size:
        raise ValueError("assignment table file is truncated")
    magic, version, q, c, fingerprint, count = _HEADER.unpack_from(data)
    if magic != TABLE_MAGIC:
        raise ValueError("not an assignment table file")
    if version != TABLE_VERSION:
        raise ValueError(f"unsupported assignment table version {version}")
    body = data[_HEADER.size:]
    if len(body) != 8 * count:
        raise ValueError("assignment table body has the wrong length")
    selected = struct.unpack(f"<{count}Q", body)
    if not is_prime(q):
        raise ValueError("assignment table modulus is not prime")
    return AssignmentTable(q, c, fingerprint, tuple(selected))
