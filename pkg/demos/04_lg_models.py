"""Laurent-polynomial families: moduli restriction with its sign twist,
Jacobian quotient dimensions, and the good/bad parameter classifier."""

from fractions import Fraction

from tglab import corpus
from tglab.lgfamily import (
    build_family,
    classify_parameter,
    jacobian_quotient_dim,
    restrict_to_km,
)
from tglab.models import build_model
from tglab.polytopes import normalized_volume
from tglab.toricfan import total_space_fan

fan, d = corpus.p1_o2()
model = build_model(fan, d)
B = model.Aprime
total = model.total
cones = [tuple(c) for c in total.max_cones]

print("== the family and its moduli restriction ==")
fam = build_family(B)
print("abstract family (y variables then coefficients):", fam)
km = restrict_to_km(B, model.M, model.m)
print("restricted over q (bundle monomial enters with +):", km)

print()
print("== Jacobian quotient dimensions ==")
vol = normalized_volume([(0, 0)] + [B.col(i) for i in range(B.cols)])
print("normalized volume of the Newton polytope:", vol)
for lam in ([1, 1, 1], [2, Fraction(1, 3), 5]):
    res = jacobian_quotient_dim(B, lam, cone_index_sets=cones)
    print(f"dimension at {lam}: {res['dim']} (slices {res['slices']})")

print()
print("== parameter classification ==")
for lam in ([1, 1, 1], [1, 1, -2]):
    verdict = classify_parameter(B, lam, cone_index_sets=cones)
    print(f"lambda = {lam}: {verdict['verdict']}")
    if "bad_face_witness" in verdict["evidence"]:
        print("   witness:", verdict["evidence"]["bad_face_witness"])

print()
print("== a two-parameter example ==")
fan, d = corpus.p1p1_o11()
total = total_space_fan(fan, d)
B = total.ray_matrix()
cones = [tuple(c) for c in total.max_cones]
res = jacobian_quotient_dim(B, [1, 2, 1, 1, 3], cone_index_sets=cones)
vol = normalized_volume([(0, 0, 0)] + [B.col(i) for i in range(B.cols)])
print("dimension:", res["dim"], "volume:", vol)
