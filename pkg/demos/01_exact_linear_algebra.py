"""Smith normal form and finitely generated abelian groups.

Every (co)homology group this package produces is a cokernel or a
subquotient computed by exact integer row/column reduction.  This script
walks through the primitives directly.
"""

from tdual import (
    FGAbelianGroup,
    IntMatrix,
    PresentedGroup,
    homology_at,
    normal_form,
    smith_normal_form,
    solve_integer,
)

a = IntMatrix.from_rows([[2, 4], [6, 8]])
u, d, v = smith_normal_form(a)
print("A =", a.data)
print("D =", d.data, " (divisibility chain on the diagonal)")
print("U*D*V == A:", u.mul(d).mul(v) == a)

print()
print("solve 2x = 4 over the integers:", solve_integer(IntMatrix.from_rows([[2]]), [4]))

# The fundamental-group presentation of a twisted circle bundle over a
# connected sum of two projective planes, abelianized:
#   <a1, a2, x | 2 a1 + 2 a2 = j x, 2 x = 0>
for j in (0, 1, 2):
    rel = IntMatrix.from_rows([[2, 2, -j], [0, 0, 2]])
    g = normal_form(PresentedGroup(3, rel))
    print(f"j = {j}: abelianization = {g}")

# Homology of a hand-built chain complex: the cone over a doubled arc
# (a projective plane).  d2 and d1 are the boundary matrices.
d2 = IntMatrix.from_rows([[1, 1], [1, -1], [-1, 1]])
d1 = IntMatrix.from_rows([[0, 1, 1], [0, -1, -1]])
h1 = homology_at(d2, d1)
print()
print("H_1 of the projective plane complex:", h1.group)
print("class of the boundary of a face:", h1.coordinates(d2.mul_vec([1, 0])))
print("class of the identified edge loop:", h1.coordinates((1, 0, 0)))
