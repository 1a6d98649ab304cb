"""Form-factor contributions to the susceptibility amplitudes.

Integrates the n-particle contributions by tensor Gauss-Legendre and by
randomized quasi Monte Carlo, compares with the closed forms for n <= 4 and
forms the amplitude ratio.
"""
import math

from ising_exact.susceptibility import amplitude_ratio, c3_analytic, c4_analytic, dn_integral

closed = {1: 1.0, 2: 1 / (12 * math.pi), 3: c3_analytic(), 4: c4_analytic()}
print(" n   C_n (quadrature)      C_n (RQMC 2^14)        closed form")
for n in range(1, 7):
    q = dn_integral(n)
    line = f"{n:2d}   {q.c_value:.12e}"
    if n >= 2:
        r = dn_integral(n, budget=2**14, method="rqmc", seed=0)
        line += f"   {r.c_value:.6e} +- {r.c_error:.1e}"
    else:
        line += " " * 27
    if n in closed:
        line += f"   {closed[n]:.12e}"
    print(line)

ratio = amplitude_ratio()
print(f"C+/C- from n <= 4: {ratio.ratio:.5f}; 12 pi = {12 * math.pi:.5f} "
      f"(relative difference {ratio.relative_to_12pi:.2e})")
