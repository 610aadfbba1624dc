"""XOR matching by folding the domain in half once.

Run with:  python demos/02_walsh_mask_halving.py
"""
from sparseconv import (SparseBinaryVector, mask_consistency_check, mask_halving_reduce,
                        mask_match_xor, oracle_match_xor, xor_correlate)

T = SparseBinaryVector.from_bits("01000010")
P = SparseBinaryVector.from_bits("10000001")

# full length: the correlation count is m=2 exactly at the matches
print("T (x) P          =", "".join(map(str, xor_correlate(T.dense(), P.dense()))))
print("oracle           =", oracle_match_xor(T, P).positions)

# fold the upper half onto the lower one through mask 101
tred, pred = mask_halving_reduce(T, P, 0b101)
print("\nT' =", tred.merged.bits(), "labels", dict(zip(tred.merged.support, tred.labels)))
print("P' =", pred.merged.bits(), "labels", dict(zip(pred.merged.support, pred.labels)))
print("T' (x) P'        =", "".join(map(str, xor_correlate(tred.merged.dense(), pred.merged.dense()))))

# split the reduced mass by origin: s*s + m*m stays put, s*m + m*s moves by the mask
chk = mask_consistency_check(tred, pred)
for k in range(4):
    print(f"  location {k:02b}: same={chk.same[k]} cross={chk.cross[k]} verdict={chk.verdict[k]}")
print("expanded back to full length:", chk.expanded())

print("\nmask matcher:", mask_match_xor(T, P, seed=0).positions)

# a fold fails when a low and a high nonzero land on the same spot
bad = SparseBinaryVector.from_bits("01000100")
print("collided fold with mask 100:", mask_halving_reduce(bad, bad, 0b100)[0].collisions)
