"""Exact pattern matching with don't-cares on sparse binary vectors.

Two convolution families are supported: XOR (dyadic) matching, reduced
with polynomial hashing over GF(2^l) and solved with Walsh-Hadamard
transforms, and shift matching, reduced with base-(q-1)/2 polynomials
over F_q and solved with number-theoretic transforms.  Every candidate is
verified exactly, so outputs always equal the brute-force answer.
"""

from .core import (ConvolutionFamily, Family, MatchResult, SparseBinaryVector,
                   verify_candidates)
from .errors import *  # noqa: F401,F403
from .fields import (Gf2mElement, Gf2mField, PrimeField, find_ntt_prime, gf_add,
                     gf_eval_poly, gf_mul, is_prime)
from .instances import (format_positions, format_sparse, gen_instance, parse_sparse,
                        read_positions, read_sparse, write_positions, write_sparse)
from .oracles import oracle_dot_convolution, oracle_match_shift, oracle_match_xor
from .primesearch import exp_prime_search, product_tree
from .shift_match import (AssignmentTable, ShiftReductionParams, encode_index_fq,
                          expand_variants, load_table, preprocess_select_assignments,
                          save_table, sparse_match_shift_deterministic,
                          sparse_match_shift_lasvegas)
from .transforms import cyclic_correlate, fwht, fwht_in_place, xor_correlate
from .xor_match import (XorReductionParams, bit_consistency_pass, encode_index_gf2,
                        hash_index, mask_consistency_check, mask_halving_reduce,
                        mask_match_xor, reduce_xor, sparse_match_xor)

__version__ = "0.1.0"
