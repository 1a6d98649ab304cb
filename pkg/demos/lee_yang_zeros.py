"""Zeros of small-lattice partition functions in the field fugacity.

All zeros lie on the unit circle; as the temperature drops to T_c the zero
closest to z = 1 moves in, pinching the positive real axis.
"""
import math

from ising_exact import critical_temperature
from ising_exact.lattice import FiniteLattice, complex_u_zeros, lee_yang_zeros

Tc = critical_temperature(1.0, 1.0)
for L in (2, 3, 4):
    lat = FiniteLattice.nearest_neighbour(L, L)
    for T in (2 * Tc, Tc):
        zs = lee_yang_zeros(lat, T)
        dev = max(abs(abs(z) - 1) for z in zs)
        edge = min(abs(math.atan2(z.imag, z.real)) for z in zs)
        print(f"L={L}  T={T / Tc:.0f} Tc  zeros={len(zs):2d}  max ||z|-1| = {dev:.1e}  "
              f"closest angle {edge:.4f}")

print("zeros in u = exp(-4/T) at zero field, 3x3 torus (not on one circle):")
for u in sorted(complex_u_zeros(FiniteLattice.nearest_neighbour(3, 3)), key=abs):
    print(f"  {u.real:+.6f} {u.imag:+.6f}i   |u| = {abs(u):.6f}")
