"""Critical correlations: closed form on the diagonal, propagation off it.

Prints C(N,N) N^(1/4) approaching the critical amplitude, then fills the
quadrant from the row Toeplitz determinants with the quadratic difference
equations and shows the amplitude is the same in every direction.
"""
import math

from ising_exact import critical_amplitude, diagonal_at_tc
from ising_exact.hirota import critical_grid_report
from ising_exact.toeplitz import critical_asymptote_check

A = float(critical_amplitude())
print(f"critical amplitude A_c = {A:.12f}")
for N in (1, 2, 4, 8, 16, 32, 64):
    print(f"  N={N:3d}  C(N,N) N^(1/4) = {float(diagonal_at_tc(N)) * N**0.25:.10f}")

fit = critical_asymptote_check()
print(f"fitted amplitude {fit.amplitude:.10f}, 1/N^2 correction {fit.correction:.6f} (1/64 = {1 / 64:.6f})")

rep = critical_grid_report(30, radius=30.0)
print(f"row and diagonal propagation routes differ by {rep.route_disagreement:.1e}")
print("C(M,N) R^(1/4) near R = 30, by direction:")
for key, amp in sorted(rep.amplitude_by_direction.items(), key=lambda kv: tuple(map(int, kv[0].split(",")))):
    M, N = map(int, key.split(","))
    print(f"  ({M:2d},{N:2d})  angle {math.degrees(math.atan2(M, N)):5.1f} deg  {amp:.5f}")
print(f"2^(1/8) A_c = {2**0.125 * A:.5f}")
