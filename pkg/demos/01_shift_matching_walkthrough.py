"""Shift matching on a 38-long text, step by step.

Run with:  python demos/01_shift_matching_walkthrough.py
"""
import numpy as np

from sparseconv import (ShiftReductionParams, SparseBinaryVector, encode_index_fq,
                        expand_variants, oracle_match_shift, preprocess_select_assignments,
                        sparse_match_shift_deterministic, sparse_match_shift_lasvegas)
from sparseconv.shift_match import _base_evals, _digits, _text_marks
from sparseconv.transforms import cyclic_correlate

text = SparseBinaryVector.from_bits("00000100101100011001010101110000000100")
pattern = SparseBinaryVector.from_bits("1000101")
print("text ones:   ", text.support)
print("pattern ones:", pattern.support)

# zeros in the pattern are don't-cares, so a match only needs the three ones to land on text ones
print("brute force: ", oracle_match_shift(text, pattern).positions)

# -- encoding indices as polynomials over F_13 ---------------------------
params = ShiftReductionParams(13, 2)  # digits in base 6, degree <= 2
p95 = encode_index_fq(95, params)
print("\n95 in base 6, constant digit first:", p95.digits)
for v in expand_variants(p95).polys:
    print("  variant", v.digits, "still reads as", v.value())

# adding two digit vectors never carries, but some variant of the sum always matches
a, b = encode_index_fq(95, params).digits, encode_index_fq(7, params).digits
print("digits(95) + digits(7) =", tuple(x + y for x, y in zip(a, b)))
print("variants of 102:       ", [v.digits for v in expand_variants(encode_index_fq(102, params)).polys])

# -- one reduction by hand -------------------------------------------------
params = ShiftReductionParams(53, 1, a=20)
marks = _text_marks(_digits(text.array, params), params.a, params)
occupancy = np.bincount(marks, minlength=params.q)
pat = np.bincount(_base_evals(_digits(pattern.array, params), params.a, params), minlength=params.q)
counts = cyclic_correlate(occupancy, pat)
hot = np.flatnonzero(counts >= len(pattern))
print(f"\nq={params.q}, a={params.a}: {len(marks)} text marks, hot reduced shifts {hot.tolist()}")
for i in (15, 19, 21):
    s = encode_index_fq(i, params).evaluate(params.a)
    print(f"  true match {i} lands on reduced shift {s}, count {counts[s]}")

# -- the two matchers --------------------------------------------------------
res = sparse_match_shift_lasvegas(text, pattern, seed=1)
print("\nlas vegas:", res.positions, f"({res.rounds_used} rounds, fallback={res.fallback})")

table = preprocess_select_assignments(text)
print(f"table: q={table.q} c={table.c} selected assignments {table.selected}")
print("deterministic:", sparse_match_shift_deterministic(text, pattern, table).positions)
