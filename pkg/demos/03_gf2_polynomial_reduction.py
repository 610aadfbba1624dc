"""XOR matching through polynomial hashing over GF(2^l).

Run with:  python demos/03_gf2_polynomial_reduction.py
"""
import random

from sparseconv import (Gf2mField, XorReductionParams, encode_index_gf2, gen_instance,
                        hash_index, oracle_match_xor, reduce_xor, sparse_match_xor)
from sparseconv.xor_match import run_xor_round

f4 = Gf2mField(2)
print("GF(4) multiplication, a=2 b=3:")
for row in f4.mul_table():
    print("  ", row)

# 17 = 01 00 01 in 2-bit blocks -> X^2 + 1
poly = encode_index_gf2(17, f4, 5)
print("\n17 ->", poly.coeffs, "  evaluated at a:", hash_index(17, XorReductionParams(5, f4, 2)))

# the hash is linear, which is what keeps XOR alignments intact after reduction
params = XorReductionParams(20, Gf2mField(12), 1234)
rng = random.Random(0)
i, j = rng.randrange(1 << 20), rng.randrange(1 << 20)
print(f"h(i^j) = {hash_index(i ^ j, params)},  h(i)^h(j) = {hash_index(i, params) ^ hash_index(j, params)}")

text, pattern, planted = gen_instance("xor", 1 << 20, 256, 16, planted=4, seed=9)
base = XorReductionParams.choose(text.domain_size, len(text), len(pattern))
print(f"\nN=2^20, n={len(text)}, m={len(pattern)} -> reduced length 2^{base.ell}")
red = reduce_xor(text, base.with_point(77))
print("text buckets: singletons", int((red.counts == 1).sum()), "multiples", int((red.counts > 1).sum()))

for r in (77, 4000, 901):
    out = run_xor_round(text, pattern, base.with_point(r))
    print(f"round r={r}: verified {out.verified}, mixed buckets {out.mixed_buckets}, clean={out.clean}")

res = sparse_match_xor(text, pattern, seed=9)
print("\nsparse matcher:", res.positions, f"rounds={res.rounds_used} fallback={res.fallback}")
print("oracle:        ", oracle_match_xor(text, pattern).positions)
print("planted:       ", planted)
