"""Fans, total-space fans, convexity, nef cones and the hull checks."""

import pytest

from tglab import corpus
from tglab.errors import BundleNotNef, IncompleteFan, NegativeCoefficient, NonPrimitiveRay
from tglab.intlinalg import IntegerMatrix
from tglab.toricfan import (
    Fan,
    anticanonical_consistency_check,
    class_is_nef,
    conv_in_support_check,
    nef_cone_anticones,
    nef_cone_pl,
    nef_cone_pullback_check,
    pl_is_convex,
    total_space_fan,
    validate_fan,
    w_set_convexity,
)

ALL_FANS = {
    "P1": corpus.projective_line(),
    "P2": corpus.projective_plane(),
    "P1xP1": corpus.p1_times_p1(),
    "F0": corpus.hirzebruch(0),
    "F1": corpus.hirzebruch(1),
    "F3": corpus.hirzebruch(3),
}


def test_validate_p2():
    diag = validate_fan(corpus.projective_plane())
    assert diag.smooth and diag.complete and diag.is_fan


def test_validate_incomplete():
    fan = Fan.make([(1, 0), (0, 1)], [(0, 1)])
    diag = validate_fan(fan)
    assert diag.smooth and not diag.complete


def test_validate_non_smooth_cone():
    fan = Fan.make([(1, 0), (1, 2)], [(0, 1)])
    diag = validate_fan(fan)
    assert not diag.smooth


def test_validate_rejects_non_primitive():
    with pytest.raises(NonPrimitiveRay):
        validate_fan(Fan.make([(2, 0), (0, 1)], [(0, 1)]))


def test_total_space_fan_p1_o2():
    fan, d = corpus.p1_o2()
    total = total_space_fan(fan, d)
    assert total.rays == ((1, 2), (-1, 0), (0, 1))
    assert total.max_cones == ((0, 2), (1, 2))
    assert validate_fan(total).smooth


def test_total_space_fan_rank_zero():
    fan = corpus.projective_plane()
    assert total_space_fan(fan, IntegerMatrix(0, 3, ())) == fan


def test_total_space_fan_p1p1():
    fan, d = corpus.p1p1_o11()
    total = total_space_fan(fan, d)
    assert total.dim == 3
    assert total.n_rays == 5
    assert len(total.max_cones) == 4


def test_total_space_fan_rejects_negative():
    fan = corpus.projective_line()
    with pytest.raises(NegativeCoefficient):
        total_space_fan(fan, IntegerMatrix.from_rows([(-1, 0)]))


def test_total_space_smooth_invariant():
    for fan, d in [corpus.p1_o2(), corpus.p2_o1(), corpus.p1p1_o11(), corpus.f3_minus_k()]:
        assert validate_fan(total_space_fan(fan, d)).smooth


def test_pl_convexity_p2_anticanonical():
    assert pl_is_convex(corpus.projective_plane(), [-1, -1, -1]) == (True, True)


def test_pl_convexity_linear_function():
    # values of the global linear function x at the rays of P2
    assert pl_is_convex(corpus.projective_plane(), [1, 0, -1]) == (True, False)


def test_pl_convexity_o_minus_one():
    assert pl_is_convex(corpus.projective_line(), [1, 0]) == (False, False)


def test_pl_needs_complete_fan():
    fan = Fan.make([(1, 0), (0, 1)], [(0, 1)])
    with pytest.raises(IncompleteFan):
        pl_is_convex(fan, [0, 0])


@pytest.mark.parametrize("name", sorted(ALL_FANS))
def test_nef_cone_two_constructions_agree(name):
    fan = ALL_FANS[name]
    assert nef_cone_anticones(fan).equals(nef_cone_pl(fan))


def test_nef_cone_rays_p1xp1():
    nef = nef_cone_anticones(corpus.p1_times_p1())
    assert sorted(nef.generators) == [(0, 1), (1, 0)]


def test_nef_cone_rank_one_examples():
    for fan in (corpus.projective_line(), corpus.projective_plane()):
        nef = nef_cone_anticones(fan)
        assert len(nef.generators) == 1


def test_pullback_identity_corpus():
    for fan, d in [corpus.p1_o2(), corpus.p2_o1(), corpus.p1p1_o11()]:
        assert nef_cone_pullback_check(fan, d)


def test_anticanonical_consistency_corpus():
    for fan, d in [corpus.p1_o2(), corpus.p2_o1(), corpus.p1p1_o11()]:
        assert anticanonical_consistency_check(fan, d)


def test_conv_in_support_positive():
    fan, d = corpus.p1_o2()
    assert conv_in_support_check(fan, d)


def test_conv_in_support_high_twist():
    # stays true for O(k) with k > 2 even though the adjoint class is not nef
    for k in (3, 5):
        fan, d = corpus.p1_ok(k)
        assert conv_in_support_check(fan, d)


def test_conv_in_support_rank_zero():
    fan = corpus.projective_plane()
    assert conv_in_support_check(fan, IntegerMatrix(0, 3, ()))


def test_conv_in_support_needs_nef():
    fan, d = corpus.p1_ok(-1)
    with pytest.raises(BundleNotNef):
        conv_in_support_check(fan, d)


def test_w_set_positive_cases():
    assert w_set_convexity(corpus.projective_plane(), IntegerMatrix(0, 3, ()))
    fan, d = corpus.p1_o2()
    assert w_set_convexity(fan, d)
    fan, d = corpus.p1p1_o11()
    assert w_set_convexity(fan, d)


def test_w_set_negative_f3():
    fan, d = corpus.f3_minus_k()
    assert not w_set_convexity(fan, d)


def test_w_set_negative_twist():
    fan, d = corpus.p1_ok(-1)
    assert not w_set_convexity(fan, d)


def test_nefness_assumption_detects_o_minus_one():
    fan, d = corpus.p1_ok(-1)
    assert not class_is_nef(fan, d.row(0))
