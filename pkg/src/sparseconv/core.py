"""Sparse binary vectors, convolution families and match results."""

from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property

import numpy as np

from .errors import DomainMismatchError, EmptyPatternError

# Indices at or above this bound are kept as Python ints in object arrays.
INT64_LIMIT = 1 << 62


class Family(str, Enum):
    XOR = "xor"
    SHIFT = "shift"


def index_array(values, domain_size):
    """Array of indices, int64 when the domain allows it, else dtype=object."""
    if domain_size <= INT64_LIMIT:
        return np.asarray(values, dtype=np.int64).reshape(-1)
    out = np.empty(len(values), dtype=object)
    out[:] = [int(v) for v in values]
    return out


@dataclass(frozen=True)
class SparseBinaryVector:
    """A 0/1 vector of length ``domain_size`` given by its sorted support."""

    domain_size: int
    support: tuple = ()

    def __post_init__(self):
        if self.domain_size < 1:
            raise ValueError("domain_size must be positive")
        support = tuple(int(i) for i in self.support)
        prev = -1
        for i in support:
            if i <= prev:
                raise ValueError(f"support not strictly ascending at {i}")
            prev = i
        if support and (support[0] < 0 or support[-1] >= self.domain_size):
            raise ValueError("support index outside [0, domain_size)")
        object.__setattr__(self, "support", support)

    @classmethod
    def from_indices(cls, domain_size, indices):
        """Build from any iterable of indices; duplicates are merged."""
        return cls(domain_size, tuple(sorted({int(i) for i in indices})))

    @classmethod
    def from_bits(cls, bits):
        """Build from a 0/1 string such as ``"01000010"`` (index 0 first)."""
        return cls(len(bits), tuple(k for k, ch in enumerate(bits) if ch == "1"))

    def __len__(self):
        return len(self.support)

    def __contains__(self, i):
        return i in self.index_set

    @cached_property
    def index_set(self):
        return frozenset(self.support)

    @cached_property
    def array(self):
        """Support as a sorted numpy array (read-only)."""
        arr = index_array(self.support, self.domain_size)
        arr.setflags(write=False)
        return arr

    def dense(self):
        out = np.zeros(self.domain_size, dtype=np.int64)
        out[list(self.support)] = 1
        return out

    def bits(self):
        return "".join("1" if k in self.index_set else "0" for k in range(self.domain_size))


@dataclass(frozen=True)
class ConvolutionFamily:
    kind: Family
    output_length: int

    @classmethod
    def for_lengths(cls, kind, text_length, pattern_length):
        kind = Family(kind)
        if kind is Family.XOR:
            if text_length != pattern_length or text_length & (text_length - 1):
                raise DomainMismatchError(
                    "XOR convolution needs equal power-of-two lengths, "
                    f"got {text_length} and {pattern_length}")
            return cls(kind, text_length)
        if pattern_length > text_length:
            raise DomainMismatchError(
                f"pattern length {pattern_length} exceeds text length {text_length}")
        return cls(kind, text_length - pattern_length + 1)

    @classmethod
    def for_vectors(cls, kind, text, pattern):
        return cls.for_lengths(kind, text.domain_size, pattern.domain_size)


@dataclass(frozen=True)
class MatchResult:
    positions: tuple
    counts_checked: int = 0
    rounds_used: int = 0
    fallback: bool = field(default=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "positions", tuple(int(p) for p in self.positions))

    def __len__(self):
        return len(self.positions)

    def as_set(self):
        return set(self.positions)


def check_instance(kind, text, pattern):
    """Validate a matching instance; returns the ConvolutionFamily."""
    family = ConvolutionFamily.for_vectors(kind, text, pattern)
    if not pattern.support:
        raise EmptyPatternError("pattern has no nonzeros; a match would be vacuous")
    return family


def _member(sorted_arr, queries):
    pos = np.searchsorted(sorted_arr, queries)
    pos = np.minimum(pos, len(sorted_arr) - 1)
    return sorted_arr[pos] == queries


def verify_candidates(kind, text, pattern, candidates):
    """Exactly check candidate output positions.

    A candidate is kept iff every pattern nonzero lands on a text nonzero.
    Candidates are dropped as soon as one pattern nonzero misses, so the
    cost is proportional to the work actually needed.  Returns the sorted
    verified positions and the number of candidates examined.
    """
    kind = Family(kind)
    size = max(text.domain_size, pattern.domain_size)
    if not isinstance(candidates, np.ndarray):
        candidates = index_array(list(candidates), size)
    elif size > INT64_LIMIT and candidates.dtype != object:
        candidates = index_array(candidates.tolist(), size)
    cand = np.unique(candidates)
    if kind is Family.SHIFT:
        hi = text.domain_size - pattern.domain_size
        cand = cand[(cand >= 0) & (cand <= hi)]
    else:
        cand = cand[(cand >= 0) & (cand < text.domain_size)]
    checked = len(cand)
    if not len(text) or not checked:
        return cand[:0], checked
    tarr = text.array
    for j in pattern.array:
        probe = cand + j if kind is Family.SHIFT else cand ^ j
        cand = cand[_member(tarr, probe)]
        if not len(cand):
            break
    return cand, checked
