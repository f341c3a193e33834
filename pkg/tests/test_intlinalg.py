"""Integer linear algebra: Smith form, kernels, sections, homogenization."""

import random

import pytest

from tglab.errors import NotARelation, NotSurjective
from tglab.intlinalg import (
    IntegerMatrix,
    extend_relation,
    homogenize,
    kernel_lattice,
    rank_mod_p,
    section_system,
    smith_normal_form,
)


def snf_invariants_hold(A):
    s = smith_normal_form(A)
    assert s.U.mul(A).mul(s.V).entries == s.D.entries
    assert abs(s.U.det()) == 1
    assert abs(s.V.det()) == 1
    diag = s.diagonal
    for a, b in zip(diag, diag[1:]):
        if a != 0:
            assert b % a == 0
        else:
            assert b == 0
    return s


def test_snf_identity():
    s = snf_invariants_hold(IntegerMatrix.identity(3))
    assert s.diagonal == [1, 1, 1]


def test_snf_two_by_two():
    s = snf_invariants_hold(IntegerMatrix.from_rows([[2, 4], [6, 8]]))
    assert s.diagonal == [2, 4]


def test_snf_single_row():
    s = snf_invariants_hold(IntegerMatrix.from_rows([[1, -1]]))
    assert s.diagonal == [1]


def test_snf_random_shapes():
    rng = random.Random(7)
    for _ in range(25):
        rows = rng.randint(1, 4)
        cols = rng.randint(1, 6)
        A = IntegerMatrix.from_rows(
            [[rng.randint(-5, 5) for _ in range(cols)] for _ in range(rows)]
        )
        snf_invariants_hold(A)


def test_kernel_p1_o2():
    B = IntegerMatrix.from_rows([[1, -1, 0], [2, 0, 1]])
    k = kernel_lattice(B)
    assert k.rank == 1
    col = k.column(0)
    assert col in ((1, 1, -2), (-1, -1, 2))
    assert B.mul_vec(col) == (0, 0)


def test_kernel_injective():
    assert kernel_lattice(IntegerMatrix.identity(2)).rank == 0


def test_kernel_p2():
    B = IntegerMatrix.from_rows([[1, 0, -1], [0, 1, -1]])
    k = kernel_lattice(B)
    assert k.rank == 1
    assert k.column(0) in ((1, 1, 1), (-1, -1, -1))


def test_kernel_saturation_mod_small_primes():
    rng = random.Random(11)
    for _ in range(10):
        s, t = rng.randint(1, 3), rng.randint(2, 6)
        B = IntegerMatrix.from_rows(
            [[rng.randint(-5, 5) for _ in range(t)] for _ in range(s)]
        )
        basis = kernel_lattice(B).basis
        if basis.cols == 0:
            continue
        rank_q = basis.rank()
        for p in (2, 3, 5, 7):
            assert rank_mod_p(basis, p) == rank_q


def test_section_system_single_row():
    ss = section_system(IntegerMatrix.from_rows([[1, -1]]))
    assert ss.verify()


def test_section_system_identity_case():
    ss = section_system(IntegerMatrix.identity(3))
    assert ss.verify()
    assert ss.L.cols == 0
    assert ss.M.rows == 0


def test_section_system_not_surjective():
    with pytest.raises(NotSurjective):
        section_system(IntegerMatrix.from_rows([[2]]))


def test_extend_relation_p1():
    d = IntegerMatrix.from_rows([(2, 0)])
    A = IntegerMatrix.from_rows([[1, -1]])
    assert extend_relation((1, 1), d, A) == (1, 1, -2)


def test_extend_relation_zero():
    d = IntegerMatrix.from_rows([(2, 0)])
    assert extend_relation((0, 0), d) == (0, 0, 0)


def test_extend_relation_p2():
    d = IntegerMatrix.from_rows([(1, 0, 0)])
    A = IntegerMatrix.from_rows([[1, 0, -1], [0, 1, -1]])
    assert extend_relation((1, 1, 1), d, A) == (1, 1, 1, -1)


def test_extend_relation_rejects_non_relations():
    d = IntegerMatrix.from_rows([(2, 0)])
    A = IntegerMatrix.from_rows([[1, -1]])
    with pytest.raises(NotARelation):
        extend_relation((1, 2), d, A)


def test_extend_relation_is_lattice_isomorphism():
    # injectivity and rank preservation on a rank-2 example
    A = IntegerMatrix.from_rows([[1, 0, -1, 0], [0, 1, 0, -1]])
    d = IntegerMatrix.from_rows([(1, 0, 1, 0)])
    basis = kernel_lattice(A).basis
    ext = [extend_relation(basis.col(a), d, A) for a in range(basis.cols)]
    ext_matrix = IntegerMatrix.from_rows(
        [[ext[a][i] for a in range(len(ext))] for i in range(A.cols + d.rows)]
    )
    assert ext_matrix.rank() == basis.cols
    seen = set()
    for a in range(len(ext)):
        assert ext[a] not in seen
        seen.add(ext[a])


def test_homogenize_single_row():
    H = homogenize(IntegerMatrix.from_rows([[1, -1]]))
    assert H.entries == ((1, 1, 1), (0, 1, -1))


def test_homogenize_empty():
    H = homogenize(IntegerMatrix(0, 0, ()))
    assert H.entries == ((1,),)


def test_homogenize_p1_o2():
    B = IntegerMatrix.from_rows([[1, -1, 0], [2, 0, 1]])
    H = homogenize(B)
    cols = [H.col(j) for j in range(4)]
    assert cols == [(1, 0, 0), (1, 1, 2), (1, -1, 0), (1, 0, 1)]
    # deleting row 0 and column 0 recovers B
    assert H.submatrix(range(1, 3), range(1, 4)).entries == B.entries
