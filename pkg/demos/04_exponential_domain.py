"""Matching when indices are far too long for any dense method.

Run with:  python demos/04_exponential_domain.py
"""
from sparseconv import (exp_prime_search, gen_instance, oracle_match_shift,
                        sparse_match_shift_lasvegas)
from sparseconv.primesearch import prime_search_state
from sparseconv.shift_match import fold_instance

# the small case by hand: which of 5, 7, 11 keeps {0, 5, 12} apart?
state, _ = prime_search_state([0, 5, 12], (5, 7, 11))
print(f"D={state.D} Q={state.Q} R={state.R} -> prime", exp_prime_search([0, 5, 12], pool=[5, 7, 11]))

text, pattern, planted = gen_instance("shift", 1 << 128, 32, 4, planted=2, seed=3)
print("\ntext domain 2^128, largest index has", text.support[-1].bit_length(), "bits")

p = exp_prime_search(text.support, prime_count=4096, prime_bits=20)
print("separating prime:", p, " residues distinct:", len({t % p for t in text.support}) == len(text))

ftext, fpat = fold_instance(text, pattern, p)
print(f"folded instance: N={ftext.domain_size}, n={len(ftext)}, M={fpat.domain_size}")

res = sparse_match_shift_lasvegas(text, pattern, seed=5)
print("\nmatches:", res.positions)
print("oracle: ", oracle_match_shift(text, pattern).positions)
print("planted:", planted)
