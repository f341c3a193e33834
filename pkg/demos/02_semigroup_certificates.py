"""Normality, Gorenstein shift and interior certificates for the doubled
semigroups, plus toric ideal generators."""

from tglab import corpus
from tglab.intlinalg import IntegerMatrix, homogenize
from tglab.semigroups import (
    AffineSemigroup,
    doubled_semigroup,
    gorenstein_shift_check,
    interior_shift_check_ungraded,
    saturation_check,
    toric_ideal_binomials,
)
from tglab.toricfan import total_space_fan

print("== degree-2 bundle on the line ==")
fan, d = corpus.p1_o2()
total = total_space_fan(fan, d)
S = doubled_semigroup(total.ray_matrix())
print("doubled generators:", [S.gen(i) for i in range(S.n_gens)])
ok, witness = saturation_check(S, 6)
print("saturated up to degree 6:", ok)
shift = tuple(a + b for a, b in zip(S.gen(0), S.gen(3)))
print("Gorenstein shift by", shift, "->", gorenstein_shift_check(S, shift, 6))
Ap = total.ray_matrix()
Sp = AffineSemigroup(
    Ap, graded=False, cone_index_sets=tuple(tuple(c) for c in total.max_cones)
)
print("interior of the undoubled cone is the bundle shift:",
      interior_shift_check_ungraded(Sp, S, Ap.col(2), 6))

print()
print("== the F3 anticanonical example ==")
fan, d = corpus.f3_minus_k()
total = total_space_fan(fan, d)
S = doubled_semigroup(total.ray_matrix())
ok, witness = saturation_check(S, 6)
print("d = (1,1,1,1): saturated:", ok, "(normal; the slice tiles into")
print("  five unimodular generator simplices, so no witness can exist)")
shift = tuple(a + b for a, b in zip(S.gen(0), S.gen(5)))
print("  Gorenstein shift still fails:", gorenstein_shift_check(S, shift, 5))

alt = IntegerMatrix.from_rows([(0, 2, 4, 0)])
total_alt = total_space_fan(corpus.hirzebruch(3), alt)
S_alt = doubled_semigroup(total_alt.ray_matrix())
ok, witness = saturation_check(S_alt, 4)
print("equivalent representative d = (0,2,4,0): saturated:", ok,
      "witness:", witness)

print()
print("== toric ideals ==")
B = total_space_fan(*corpus.p1_o2()).ray_matrix()
print("degree-2 bundle on the line:", toric_ideal_binomials(B, 4))
B2 = homogenize(corpus.projective_plane().ray_matrix())
print("homogenized plane:", toric_ideal_binomials(B2, 4))
