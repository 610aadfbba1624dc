import random
from itertools import product

import numpy as np
import pytest
from hypothesis import given, strategies as st

from sparseconv import (Gf2mField, SparseBinaryVector, XorReductionParams, bit_consistency_pass,
                        encode_index_gf2, gen_instance, hash_index, mask_consistency_check,
                        mask_halving_reduce, mask_match_xor, oracle_match_xor, reduce_xor,
                        sparse_match_xor)
from sparseconv.errors import ReductionTooLargeError
from sparseconv.xor_match import (BitVerdict, MaskVerdict, Occupancy, hash_indices,
                                  run_xor_round)


def params(L, ell, r):
    return XorReductionParams(L, Gf2mField(ell), r)


class TestEncoding:
    def test_seventeen(self):
        poly = encode_index_gf2(17, Gf2mField(2), 5)
        assert poly.coeffs == (1, 0, 1)
        assert poly.index() == 17

    def test_zero(self):
        assert encode_index_gf2(0, Gf2mField(3), 10).coeffs == (0, 0, 0, 0)

    def test_five(self):
        assert encode_index_gf2(5, Gf2mField(2), 4).coeffs == (1, 1)

    @given(st.integers(1, 64), st.integers(1, 16), st.data())
    def test_blocks_reassemble(self, L, ell, data):
        i = data.draw(st.integers(0, (1 << L) - 1))
        poly = encode_index_gf2(i, Gf2mField(ell), L)
        assert poly.index() == i
        assert len(poly.coeffs) == -(-L // ell)
        assert all(0 <= c < 1 << ell for c in poly.coeffs)

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            encode_index_gf2(32, Gf2mField(2), 5)


class TestHash:
    def test_zero_index(self):
        for r in range(16):
            assert hash_index(0, params(12, 4, r)) == 0

    def test_worked_value(self):
        # X^2 + 1 at X = a in GF(4): a*a = b, b + 1 = a
        assert hash_index(17, params(5, 2, 2)) == 2

    def test_linearity_sampled(self):
        rng = random.Random(0)
        for _ in range(10_000):
            ell = rng.choice([2, 5, 8, 13])
            L = rng.randrange(1, 40)
            p = params(L, ell, rng.randrange(1 << ell))
            i, j = rng.randrange(1 << L), rng.randrange(1 << L)
            assert hash_index(i ^ j, p) == hash_index(i, p) ^ hash_index(j, p)

    @pytest.mark.parametrize("L,ell", [(12, 4), (9, 3)])
    def test_linearity_exhaustive(self, L, ell):
        idx = np.arange(1 << L)
        for r in range(1 << ell):
            h = hash_indices(idx, params(L, ell, r)).astype(np.int32)
            assert (h[idx[:, None] ^ idx[None, :]] == (h[:, None] ^ h[None, :])).all()

    @given(st.integers(1, 30), st.sampled_from([2, 7, 12]), st.data())
    def test_vectorised_equals_horner(self, L, ell, data):
        p = params(L, ell, data.draw(st.integers(0, (1 << ell) - 1)))
        idx = data.draw(st.lists(st.integers(0, (1 << L) - 1), min_size=1, max_size=20))
        assert list(hash_indices(np.array(idx), p)) == [hash_index(i, p) for i in idx]

    def test_wide_indices(self):
        p = params(100, 8, 77)
        idx = [(1 << 99) + 5, 3, (1 << 64) + (1 << 63)]
        arr = np.empty(3, dtype=object)
        arr[:] = idx
        assert list(hash_indices(arr, p)) == [hash_index(i, p) for i in idx]

    @given(st.data())
    def test_collisions_bounded_by_degree(self, data):
        L = data.draw(st.integers(1, 16))
        i = data.draw(st.integers(0, (1 << L) - 1))
        j = data.draw(st.integers(0, (1 << L) - 1).filter(lambda x: x != i))
        f = Gf2mField(8)
        d = -(-L // 8) - 1
        same = sum(hash_index(i, XorReductionParams(L, f, r)) ==
                   hash_index(j, XorReductionParams(L, f, r)) for r in range(256))
        assert same <= d


class TestParams:
    def test_choose(self):
        p = XorReductionParams.choose(1 << 20, 256, 16)
        assert p.size >= 8 * (256 + 16) and p.size // 2 < 8 * (256 + 16)
        assert p.degree == -(-20 // p.ell) - 1
        assert XorReductionParams.choose(8, 2, 2).ell >= 2

    def test_too_large(self):
        with pytest.raises(ReductionTooLargeError):
            XorReductionParams.choose(1 << 40, 1 << 20, 1 << 20)

    def test_bad_inputs(self):
        with pytest.raises(ValueError):
            XorReductionParams.choose(12, 2, 2)
        with pytest.raises(ValueError):
            XorReductionParams.choose(16, 2, 2, oversize_factor=1)


class TestReduce:
    def test_single_nonzero(self):
        red = reduce_xor(SparseBinaryVector(1 << 10, (777,)), params(10, 4, 3))
        assert (red.occupancy == Occupancy.SINGLETON).sum() == 1

    def test_injective_pair(self, walsh_instance):
        text, _ = walsh_instance
        for r in range(4):
            p = params(3, 2, r)
            if hash_index(1, p) == hash_index(6, p):
                continue
            red = reduce_xor(text, p)
            assert sorted(red.representative[red.counts == 1].tolist()) == [1, 6]

    def test_mass_and_singletons(self):
        rng = random.Random(100)
        v = SparseBinaryVector.from_indices(1 << 20, rng.sample(range(1 << 20), 100))
        red = reduce_xor(v, params(20, 12, rng.randrange(1 << 12)))
        assert red.counts.sum() == 100
        for k in np.flatnonzero(red.counts == 1):
            assert red.bucket(k) is Occupancy.SINGLETON
            (src,) = [i for i in v.support if hash_index(i, red.params) == k]
            assert red.representative[k] == src == red.xor_of_indices[k]


def pair_oracle(text, pattern, p):
    """bucket -> list of output indices of all contributing (t, j) pairs."""
    out = {}
    for t in text.support:
        for j in pattern.support:
            out.setdefault(hash_index(t, p) ^ hash_index(j, p), []).append(t ^ j)
    return out


class TestBitPass:
    def test_single_pair(self):
        text = SparseBinaryVector(1 << 8, (0b10110101,))
        pattern = SparseBinaryVector(1 << 8, (0b00111100,))
        p = params(8, 3, 5)
        k = hash_index(text.support[0], p) ^ hash_index(pattern.support[0], p)
        w = text.support[0] ^ pattern.support[0]
        for b in range(8):
            res = bit_consistency_pass(reduce_xor(text, p), reduce_xor(pattern, p), b)
            assert res.verdict[k] == (BitVerdict.ALL_ONE if w >> b & 1 else BitVerdict.ALL_ZERO)

    @pytest.mark.parametrize("seed", range(5))
    def test_against_pair_enumeration(self, seed):
        text, pattern, _ = gen_instance("xor", 1 << 10, 30, 5, planted=1, seed=seed)
        p = params(10, 5, seed * 7 % 32)
        tred, pred = reduce_xor(text, p), reduce_xor(pattern, p)
        pairs = pair_oracle(text, pattern, p)
        for b in range(10):
            res = bit_consistency_pass(tred, pred, b)
            for k in range(p.size):
                outs = pairs.get(k, [])
                assert res.total[k] == len(outs)
                ones = sum(w >> b & 1 for w in outs)
                assert res.ones[k] == ones
                if ones == 0:
                    assert res.verdict[k] == BitVerdict.ALL_ZERO
                elif ones == len(outs):
                    assert res.verdict[k] == BitVerdict.ALL_ONE
                else:
                    assert res.verdict[k] == BitVerdict.MIXED

    def test_param_mismatch(self, walsh_instance):
        t, p = walsh_instance
        with pytest.raises(ValueError):
            bit_consistency_pass(reduce_xor(t, params(3, 2, 1)), reduce_xor(p, params(3, 2, 2)), 0)


class TestSparseMatchXor:
    def test_walsh_example(self, walsh_instance):
        assert sparse_match_xor(*walsh_instance).positions == (1, 6)

    def test_planted_instance(self):
        text, pattern, planted = gen_instance("xor", 1 << 20, 256, 16, 4, seed=9)
        res = sparse_match_xor(text, pattern)
        assert res.as_set() == oracle_match_xor(text, pattern).as_set()
        assert set(planted) <= res.as_set()

    def test_single_point_pattern(self):
        text = SparseBinaryVector(1 << 12, (3, 99, 2000))
        res = sparse_match_xor(text, SparseBinaryVector(1 << 12, (0,)))
        assert res.positions == text.support and res.rounds_used == 0

    @given(st.integers(3, 14), st.integers(2, 80), st.integers(1, 10), st.integers(0, 3),
           st.integers(0, 2**32), st.integers(1, 4))
    def test_equals_oracle(self, logN, n, m, planted, seed, rounds):
        N = 1 << logN
        n, m = min(n, N), min(m, n, N)
        try:
            text, pattern, _ = gen_instance("xor", N, n, m, planted, seed)
        except Exception:
            return
        res = sparse_match_xor(text, pattern, seed=seed, max_rounds=rounds)
        assert res.as_set() == oracle_match_xor(text, pattern).as_set()
        assert list(res.positions) == sorted(set(res.positions))

    def test_wide_domain(self):
        text, pattern, planted = gen_instance("xor", 1 << 100, 40, 4, planted=2, seed=5)
        res = sparse_match_xor(text, pattern, seed=5)
        assert res.as_set() == oracle_match_xor(text, pattern).as_set() >= set(planted)

    def test_round_soundness(self):
        clean_rounds = 0
        for seed in range(200):
            text, pattern, _ = gen_instance("xor", 1 << 12, 64, 2 + seed % 6,
                                            planted=seed % 3, seed=seed)
            base = XorReductionParams.choose(1 << 12, len(text), len(pattern))
            out = run_xor_round(text, pattern, base.with_point(seed % base.size))
            if out.clean:
                clean_rounds += 1
                assert set(out.verified) == oracle_match_xor(text, pattern).as_set()
        assert clean_rounds > 20

    def test_seed_reproducible(self):
        text, pattern, _ = gen_instance("xor", 1 << 14, 200, 6, planted=2, seed=4)
        a = sparse_match_xor(text, pattern, seed=11, max_rounds=2)
        b = sparse_match_xor(text, pattern, seed=11, max_rounds=2)
        assert (a.positions, a.rounds_used, a.counts_checked) == \
            (b.positions, b.rounds_used, b.counts_checked)


class TestMaskHalving:
    def test_reduced_vectors_and_labels(self, walsh_instance):
        tred, pred = mask_halving_reduce(*walsh_instance, 0b101)
        assert tred.merged.bits() == "0101"
        assert pred.merged.bits() == "1010"
        assert dict(zip(tred.merged.support, tred.labels)) == {0b01: "s", 0b11: "m"}
        assert dict(zip(pred.merged.support, pred.labels)) == {0b00: "s", 0b10: "m"}
        assert not tred.collided and not pred.collided

    def test_identity_mask_fold(self):
        text = SparseBinaryVector.from_bits("10010110")
        tred, _ = mask_halving_reduce(text, text, 0b100)
        assert tred.merged.support == (0, 1, 2, 3)
        assert tred.low.support == (0, 3) and tred.high.support == (1, 2)
        assert tred.labels == ("s", "m", "m", "s")

    def test_collision_flagged(self):
        text = SparseBinaryVector.from_bits("01000100")
        tred, _ = mask_halving_reduce(text, text, 0b100)
        assert tred.collided and tred.collisions == (1,)

    @pytest.mark.parametrize("mask", [0b011, 0b1000, 0])
    def test_bad_mask(self, walsh_instance, mask):
        with pytest.raises(ValueError):
            mask_halving_reduce(*walsh_instance, mask)

    def test_consistency_example(self, walsh_instance):
        chk = mask_consistency_check(*mask_halving_reduce(*walsh_instance, 0b101))
        assert chk.verdict[0b01] == MaskVerdict.SS_MM
        assert chk.verdict[0b11] == MaskVerdict.MS
        assert chk.verdict[0b00] == chk.verdict[0b10] == MaskVerdict.ZERO
        assert chk.expanded() == {0b001: 2, 0b110: 2}

    def test_static_pattern(self):
        # pattern entirely in the lower half: text labels decide every verdict
        text = SparseBinaryVector.from_bits("0100001000000000")
        pattern = SparseBinaryVector.from_bits("1000000000000000")
        chk = mask_consistency_check(*mask_halving_reduce(text, pattern, 0b1011))
        tred, _ = mask_halving_reduce(text, pattern, 0b1011)
        for k, lab in zip(tred.merged.support, tred.labels):
            assert chk.verdict[k] == (MaskVerdict.SS_MM if lab == "s" else MaskVerdict.MS)

    def test_mask_cancels_in_xor(self):
        for i, k, mask in product(range(16), range(16), range(8, 16)):
            for j in range(16):
                assert (i ^ k == j) == ((i ^ mask) ^ (k ^ mask) == j)

    @pytest.mark.parametrize("seed", range(40))
    def test_random_l10(self, seed):
        text, pattern, _ = gen_instance("xor", 1 << 10, 24, 3, planted=seed % 3, seed=seed)
        rng = random.Random(seed)
        truth = oracle_match_xor(text, pattern).as_set()
        for _ in range(20):
            mask = 512 | rng.randrange(512)
            tred, pred = mask_halving_reduce(text, pattern, mask)
            if tred.collided or pred.collided:
                continue
            chk = mask_consistency_check(tred, pred)
            full = {w for w, mass in chk.expanded().items() if mass == len(pattern)}
            assert full == truth
            for w in truth:
                assert chk.verdict[w if w < 512 else w ^ mask] != MaskVerdict.INCONSISTENT
            return

    @given(st.integers(2, 12), st.integers(1, 40), st.integers(1, 6), st.integers(0, 2**32))
    def test_mask_match_equals_oracle(self, logN, n, m, seed):
        N = 1 << logN
        n, m = min(n, N), min(m, n, N)
        text, pattern, _ = gen_instance("xor", N, n, m, planted=1, seed=seed)
        res = mask_match_xor(text, pattern, seed=seed)
        if res is not None:
            assert res.as_set() == oracle_match_xor(text, pattern).as_set()

    def test_all_masks_collide(self):
        text = SparseBinaryVector(4, (0, 1, 2, 3))
        assert mask_match_xor(text, SparseBinaryVector(4, (0,)), seed=0) is None
