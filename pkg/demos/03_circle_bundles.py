"""Circle bundles as classification data and their total-space model.

A bundle is a pair (xi, e): an orientation sign system and a twisted Euler
2-cocycle.  The total space is modeled by a twisted mapping cone whose
long exact sequence is the Gysin sequence; its cohomology reproduces the
classical tables, torsion included.
"""

from tdual import (
    IntMatrix,
    PresentedGroup,
    build_bundle,
    circle,
    crosscap_sum,
    normal_form,
    same_bundle,
    sigma,
    total_cohomology,
    total_homology,
)

# The unique non-oriented circle bundle over the circle is the Klein bottle.
s1 = circle()
kb = build_bundle(s1, s1.xi(), 0)
print("Klein bottle over the circle:")
print("  H^*(K, Z)    =", ", ".join(map(str, total_cohomology(kb))))
print("  H^*(K, Z_xi) =", ", ".join(map(str, total_cohomology(kb, s1.xi()))))

# Over a genus-g surface with nonzero orientation class there are exactly
# two bundles; their degree-2 cohomology differs by a torsion summand.
info = sigma(2)
for j in (0, 1):
    b = build_bundle(info, info.xi(), j)
    print(f"genus-2 bundle, twisted Euler index {j}: "
          f"H^2 = {total_cohomology(b)[2]}")
print("the two bundles are distinct:",
      not same_bundle(build_bundle(info, info.xi(), 0),
                      build_bundle(info, info.xi(), 1)))

# Over connected sums of projective planes the Euler index is an integer,
# and the degree-2 torsion distinguishes even from odd: two 2-torsion
# factors versus one 4-torsion factor.
info = crosscap_sum(2)
for j in (0, 1, 2, 3):
    b = build_bundle(info, info.xi(), j)
    h1 = total_homology(b)[1]
    rel = IntMatrix.from_rows([[2, 2, -j], [0, 0, 2]])
    oracle = normal_form(PresentedGroup(3, rel))
    print(f"j = {j}: H^2(E) = {total_cohomology(b)[2]},  "
          f"H_1(E) = {h1} (pi_1 oracle: {oracle})")
