"""Cohomology of surfaces with sign-twisted coefficients.

The catalog builds each surface as an identification polygon, coned and
subdivided into a complex whose faces are determined by vertex tuples.
Sign local systems on edges encode integer coefficients twisted by a
homomorphism from the fundamental group to {+-1}.
"""

from tdual import cohomology, crosscap_sum, homology, klein_bottle, poincare_duality_check, sigma

for info in (sigma(1), sigma(2), klein_bottle(), crosscap_sum(1), crosscap_sum(3)):
    x = info.complex
    print(f"{info.name}: V={x.count(0)} E={x.count(1)} F={x.count(2)} "
          f"chi={x.euler_characteristic()}")
    plain = [g.group for g in cohomology(x)]
    twisted = [g.group for g in cohomology(x, info.xi())]
    print("  H^*(M, Z)    =", ", ".join(map(str, plain)))
    print("  H^*(M, Z_xi) =", ", ".join(map(str, twisted)))

# Poincare duality with the orientation local system, checked as abstract
# group isomorphisms in every degree.
info = crosscap_sum(3)
report = poincare_duality_check(info.complex, info.orientation_system(),
                                systems=[("Z", None), ("xi", info.xi())])
print()
print("duality on the three-crosscap surface:")
print(report)

# Homology sees coinvariants in degree zero: the twisted H_0 of the
# projective plane is the mod-2 quotient.
rp2 = crosscap_sum(1)
print()
print("H_0(RP2, Z_w) =", homology(rp2.complex, rp2.xi())[0].group)
