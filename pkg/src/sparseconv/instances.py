"""Seeded instance generation and the ``.sv`` text format.

File layout: ``#`` starts a comment line, the first other line is
``N=<decimal>``, then one decimal index per line in strictly ascending
order.  Match listings are one decimal position per line.
"""

import io
import os
import random

from .core import Family, SparseBinaryVector
from .errors import InfeasibleInstanceError, ParseError

MAX_INDEX_BITS = 128


def gen_instance(family, N, n, m, planted=0, seed=0, pattern_domain=None):
    """Random text/pattern pair with ``planted`` guaranteed matches.

    The pattern has ``m`` distinct nonzeros (index 0 always present for
    SHIFT).  The text is the union of the planted pattern copies topped up
    with uniform noise until it has ``n`` nonzeros.  ``pattern_domain`` is
    the pattern length M for SHIFT; by default the pattern is drawn from
    ``[0, max(m, N // 8))`` and its domain trimmed to its largest index + 1.
    XOR patterns always share the text domain.

    Returns ``(text, pattern, planted_positions)``.
    """
    family = Family(family)
    if not (1 <= m <= n) or planted < 0:
        raise InfeasibleInstanceError(f"need n >= m >= 1 and planted >= 0 (n={n}, m={m})")
    if n > N:
        raise InfeasibleInstanceError(f"n={n} nonzeros do not fit in N={N}")
    if family is Family.XOR:
        if N & (N - 1):
            raise InfeasibleInstanceError("XOR domain must be a power of two")
        M = N
    else:
        M = max(m, N // 8) if pattern_domain is None else pattern_domain
        if M > N:
            raise InfeasibleInstanceError(f"pattern domain {M} exceeds N={N}")
    if m > M:
        raise InfeasibleInstanceError(f"m={m} nonzeros do not fit in M={M}")
    positions = N if family is Family.XOR else N - M + 1
    if planted > positions:
        raise InfeasibleInstanceError(f"cannot plant {planted} matches in {positions} positions")

    rng = random.Random(seed)
    if family is Family.SHIFT:
        pat = [0] + _sample(rng, 1, M, m - 1)
        # keep the pattern tight so that positions run up to N - max(pattern) - 1
        M = M if pattern_domain is not None else max(pat) + 1
        positions = N - M + 1
    else:
        pat = _sample(rng, 0, N, m)
    where = sorted(_sample(rng, 0, positions, planted))
    text = set()
    for i in where:
        if family is Family.SHIFT:
            text.update(i + j for j in pat)
        else:
            text.update(i ^ j for j in pat)
    while len(text) < n:
        text.update(_sample(rng, 0, N, n - len(text)))
    return (SparseBinaryVector.from_indices(N, text),
            SparseBinaryVector.from_indices(M, pat),
            tuple(where))


def _sample(rng, lo, hi, k):
    """k distinct ints from [lo, hi); works for ranges wider than a C ssize_t."""
    if hi - lo < 1 << 62:
        return rng.sample(range(lo, hi), k)
    seen = set()
    while len(seen) < k:
        seen.add(rng.randrange(lo, hi))
    return sorted(seen)


def _open(target, mode):
    if isinstance(target, (str, os.PathLike)):
        return open(target, mode, encoding="utf-8", newline="\n"), True
    return target, False


def parse_sparse(text):
    """Parse ``.sv`` content given as a string."""
    return read_sparse(io.StringIO(text))


def read_sparse(source):
    """Read a sparse vector from a path or a text stream."""
    fh, owned = _open(source, "r")
    try:
        domain = None
        support = []
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if domain is None:
                key, sep, value = line.partition("=")
                if not sep or key.strip() != "N":
                    raise ParseError(f"expected 'N=<decimal>', got {line!r}", lineno)
                domain = _decimal(value.strip(), lineno)
                if domain < 1:
                    raise ParseError("domain size must be positive", lineno)
                continue
            idx = _decimal(line, lineno)
            if idx >= domain:
                raise ParseError(f"index {idx} out of range for N={domain}", lineno)
            if support and idx <= support[-1]:
                kind = "duplicate" if idx == support[-1] else "unsorted"
                raise ParseError(f"{kind} index {idx}", lineno)
            support.append(idx)
        if domain is None:
            raise ParseError("missing 'N=<decimal>' header")
        return SparseBinaryVector(domain, tuple(support))
    finally:
        if owned:
            fh.close()


def _decimal(token, lineno):
    if not token.isdigit() or not token.isascii():
        raise ParseError(f"not a decimal integer: {token!r}", lineno)
    value = int(token)
    if value.bit_length() > MAX_INDEX_BITS + 1:
        raise ParseError(f"value wider than {MAX_INDEX_BITS} bits", lineno)
    return value


def format_sparse(vec):
    return "".join([f"N={vec.domain_size}\n"] + [f"{i}\n" for i in vec.support])


def write_sparse(vec, target):
    fh, owned = _open(target, "w")
    try:
        fh.write(format_sparse(vec))
    finally:
        if owned:
            fh.close()


def format_positions(positions):
    return "".join(f"{p}\n" for p in sorted(positions))


def write_positions(positions, target):
    fh, owned = _open(target, "w")
    try:
        fh.write(format_positions(positions))
    finally:
        if owned:
            fh.close()


def read_positions(source):
    fh, owned = _open(source, "r")
    try:
        return [int(line) for line in fh if line.strip()]
    finally:
        if owned:
            fh.close()
