"""Wedge construction: trimming a doubled Hamming code.

The doubled perfect code D of Q_n is large. The construction finds a
subset V of D whose removal leaves a set that still dominates, and the
saving |V| grows with n.

Run: python3 demos/02_wedge_construction.py
"""

import time

from cubedom.coverage import check_domination
from cubedom.wedge import canonical_range, construct_canonical

for nhat in (3, 4):
    for m in canonical_range(nhat):
        t0 = time.perf_counter()
        res = construct_canonical(nhat, m)
        d = res.decomp
        n = res.target_n
        ok = check_domination(n, res.result).dominated
        print(
            f"n={n:2d}  S={d.S}  |D|={len(res.D):8d}  |V|={len(res.V):6d}  "
            f"|D\\V|={len(res.result):8d}  dominates={ok}  ({time.perf_counter() - t0:.2f}s)"
        )

print("\nMetadata written next to the n=11 build:")
res = construct_canonical(3, 0)
print(" ", res.metadata())
