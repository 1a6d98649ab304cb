"""Bose/Fermi character identities checked coefficient by coefficient."""
from ising_exact.qseries import (check_named_identity, fermionic_e8, gap_partition_counts, rocha_caridi,
                                 verify_identity)

print("M(2,5) character:", list(rocha_caridi(2, 5, 1, 2, 15).coeffs))
print("partitions with gaps >= 2:", list(gap_partition_counts(15).coeffs))
print("E8 fermionic sum:", list(fermionic_e8(15).coeffs))
print("M(3,4) character (1,1):", list(rocha_caridi(3, 4, 1, 1, 15).coeffs))

for name, K in (("m34-spin", 500), ("m34-e8", 30), ("rr1", 1000), ("rr2", 1000)):
    res = check_named_identity(name, K)
    print(f"{name:9s} to q^{K}: {'holds' if res.ok else f'fails at q^{res.first_mismatch}'}")

bad = verify_identity(rocha_caridi(3, 4, 1, 2, 20), rocha_caridi(2, 5, 1, 1, 20))
print(f"mismatched pair differs first at q^{bad.first_mismatch}: {bad.left} vs {bad.right}")
