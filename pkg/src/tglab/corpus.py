"""The small standard fans used throughout the tests and demos."""

from __future__ import annotations

from tglab.intlinalg import IntegerMatrix
from tglab.toricfan import Fan


def projective_line() -> Fan:
    return Fan.make([(1,), (-1,)], [(0,), (1,)])


def projective_plane() -> Fan:
    return Fan.make([(1, 0), (0, 1), (-1, -1)], [(0, 1), (1, 2), (0, 2)])


def p1_times_p1() -> Fan:
    return Fan.make(
        [(1, 0), (-1, 0), (0, 1), (0, -1)],
        [(0, 2), (0, 3), (1, 2), (1, 3)],
    )


def hirzebruch(k: int) -> Fan:
    """F_k with rays (1,0), (0,1), (-1,k), (0,-1)."""
    return Fan.make(
        [(1, 0), (0, 1), (-1, k), (0, -1)],
        [(0, 1), (1, 2), (2, 3), (3, 0)],
    )


def bundle(fan: Fan, *rows) -> IntegerMatrix:
    """Bundle coefficient matrix from one row of divisor coefficients per
    line bundle; no rows means the rank-zero bundle."""
    if not rows:
        return IntegerMatrix(0, fan.n_rays, ())
    return IntegerMatrix.from_rows(rows)


def p1_o2():
    """P^1 with O(2) via the divisor 2 D_1."""
    fan = projective_line()
    return fan, bundle(fan, (2, 0))


def p2_o1():
    """P^2 with O(1) via the divisor D_1."""
    fan = projective_plane()
    return fan, bundle(fan, (1, 0, 0))


def p1p1_o11():
    """P^1 x P^1 with O(1,1) via the divisor D_1 + D_3."""
    fan = p1_times_p1()
    return fan, bundle(fan, (1, 0, 1, 0))


def f3_minus_k():
    """F_3 with the anticanonical bundle via D_1 + D_2 + D_3 + D_4."""
    fan = hirzebruch(3)
    return fan, bundle(fan, (1, 1, 1, 1))


def p1_ok(k: int):
    """P^1 with O(k) via the divisor k D_1 (negative k allowed on purpose)."""
    fan = projective_line()
    return fan, IntegerMatrix.from_rows([(k, 0)])
