"""The bounds ledger: exact chi values for every n below 1024.

chi_n measures how far gamma(Q_n) sits below the doubled-code size,
gamma_n = (1 - chi_n) 2^(n - nhat). The ledger combines literature
seeds, the gain formula and wedge propagation, all in exact rationals.

Run: python3 demos/03_bounds_ledger.py
"""

from cubedom.bounds import best_bounds, format_chi, format_gamma, render_table

entries = best_bounds(300)
print(render_table(entries[:33], "figure1"))

print("Some larger rows:")
for n in (75, 149, 151, 278):
    e = entries[n - 1]
    print(
        f"  n={n}: chi >= {format_chi(e.chi_lower)}, gamma <= {format_gamma(e.gamma_upper)}, "
        f"from {e.provenance}"
    )

print("\nGrid up to n = 127, first lines:")
print("\n".join(render_table(best_bounds(127), "grid").splitlines()[:8]))
