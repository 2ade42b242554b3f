"""Small cubes: perfect codes, exact minima and the doubling trick.

Run: python3 demos/01_small_cubes.py
"""

from cubedom.codes import double_dominating, hamming_graph_code
from cubedom.coverage import brute_force_gamma, check_domination

print("Perfect codes cover each vertex exactly once.")
for k in (2, 3, 4):
    n = (1 << k) - 1
    code = hamming_graph_code(k).code
    report = check_domination(n, code, histogram=True)
    print(f"  Q_{n}: {len(code)} codewords, multiplicities {report.multiplicity_histogram}")

print("\nExact domination numbers, found by branch and bound:")
for n in range(1, 6):
    gamma, witness = brute_force_gamma(n)
    print(f"  gamma_{n} = {gamma}   witness {' '.join(witness.strings())}")

print("\nDoubling a dominating set of Q_n gives one of Q_(2n+1), 2^n times larger.")
for n in range(1, 6):
    gamma, witness = brute_force_gamma(n)
    big = double_dominating(witness)
    ok = check_domination(2 * n + 1, big).dominated
    print(f"  Q_{n} -> Q_{2 * n + 1}: {len(big)} vertices, dominates={ok}")
