"""Brute-force reference answers.

The sparse oracles count every text/pattern incidence for every candidate
position, without early exit, so their cost is n*m membership probes no
matter what the data looks like.  They are the baseline the fast matchers
are compared against and the ground truth for every equivalence test.
"""

import numpy as np

from .core import (Family, ConvolutionFamily, MatchResult, check_instance,
                   _member)
from .errors import OracleTooLargeError

ORACLE_MAX_LENGTH = 1 << 16


def _match_counts(text, pattern, candidates, op):
    counts = np.zeros(len(candidates), dtype=np.int64)
    if not len(text):
        return counts
    tarr = text.array
    for j in pattern.array:
        counts += _member(tarr, op(candidates, j))
    return counts


def oracle_match_shift(text, pattern):
    """All i in [0, N-M] with i + j in text for every pattern nonzero j."""
    check_instance(Family.SHIFT, text, pattern)
    p0 = pattern.support[0]
    cand = text.array - p0
    cand = cand[(cand >= 0) & (cand <= text.domain_size - pattern.domain_size)]
    counts = _match_counts(text, pattern, cand, np.add)
    return MatchResult(cand[counts == len(pattern)].tolist(), counts_checked=len(cand))


def oracle_match_xor(text, pattern):
    """All i in [0, 2^L) with i XOR j in text for every pattern nonzero j."""
    check_instance(Family.XOR, text, pattern)
    p0 = pattern.support[0]
    cand = np.sort(text.array ^ p0)
    counts = _match_counts(text, pattern, cand, np.bitwise_xor)
    return MatchResult(cand[counts == len(pattern)].tolist(), counts_checked=len(cand))


def oracle_dot_convolution(v1, v2, family):
    """Dense dot-product convolution, out[j] = sum_i v1[beta_j(i)] * v2[i].

    ``family`` is a Family (or its name) or a ConvolutionFamily.  For XOR
    beta_j(i) = i ^ j over equal power-of-two lengths; for SHIFT
    beta_j(i) = i + j and the output has len(v1) - len(v2) + 1 entries.
    """
    v1 = np.asarray(v1, dtype=object)
    v2 = np.asarray(v2, dtype=object)
    if max(len(v1), len(v2)) > ORACLE_MAX_LENGTH:
        raise OracleTooLargeError(
            f"dense oracle limited to length {ORACLE_MAX_LENGTH}")
    kind = family.kind if isinstance(family, ConvolutionFamily) else Family(family)
    fam = ConvolutionFamily.for_lengths(kind, len(v1), len(v2))
    idx = np.arange(len(v2))
    out = []
    for j in range(fam.output_length):
        beta = idx ^ j if kind is Family.XOR else idx + j
        out.append(int(np.dot(v1[beta], v2)) if len(v2) else 0)
    return np.array(out, dtype=object).astype(np.int64) if out else np.zeros(0, np.int64)
