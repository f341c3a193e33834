"""Hulls, faces, normalized volumes and lattice points."""

import random

import pytest

from tglab import corpus
from tglab.errors import DegeneratePolytope
from tglab.polytopes import LatticePolytope, faces, lattice_points, normalized_volume


def test_segment_faces():
    poly = LatticePolytope.from_points([(0,), (1,), (-1,)])
    fs = faces(poly)
    vertex_sets = sorted(tuple(sorted(f.indices)) for f in fs if f.dim == 0)
    assert vertex_sets == [(1,), (2,)]
    whole = [f for f in fs if f.supporting is None]
    assert len(whole) == 1 and whole[0].dim == 1


def test_p2_polytope_faces():
    pts = [(0, 0), (1, 0), (0, 1), (-1, -1)]
    poly = LatticePolytope.from_points(pts)
    fs = faces(poly)
    assert sum(1 for f in fs if f.dim == 0) == 3
    assert sum(1 for f in fs if f.dim == 1) == 3
    assert sum(1 for f in fs if f.dim == 2) == 1
    # the origin is interior, on no proper face
    assert all(0 not in f.indices for f in fs if f.supporting is not None)


def test_p1_o2_edge_point():
    # (0,1) = midpoint of (1,2) and (-1,0): a generator on an edge
    pts = [(0, 0), (1, 2), (-1, 0), (0, 1)]
    poly = LatticePolytope.from_points(pts)
    assert sorted(poly.vertex_indices) == [0, 1, 2]
    edge = [
        f
        for f in faces(poly)
        if f.dim == 1 and f.indices >= {1, 2}
    ]
    assert edge and 3 in edge[0].indices


def test_volume_unit_simplices():
    assert normalized_volume([(0,), (1,)]) == 1
    assert normalized_volume([(0, 0), (1, 0), (0, 1)]) == 1
    assert normalized_volume([(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)]) == 1


def test_volume_p2():
    assert normalized_volume([(0, 0), (1, 0), (0, 1), (-1, -1)]) == 3


def test_volume_p1_o2():
    assert normalized_volume([(0, 0), (1, 2), (-1, 0), (0, 1)]) == 2


def test_volume_degenerate():
    with pytest.raises(DegeneratePolytope):
        normalized_volume([(0, 0), (1, 0), (2, 0)])


def test_volume_triangulation_order_independent():
    rng = random.Random(3)
    cases = [
        [(0, 0), (1, 0), (0, 1), (-1, -1)],
        [(0, 0), (1, 2), (-1, 0), (0, 1)],
        [(0, 0), (1, 0), (-1, 0), (0, 1), (0, -1)],
        [(0, 0, 0), (1, 0, 1), (-1, 0, 0), (0, 1, 1), (0, -1, 0), (0, 0, 1)],
    ]
    for pts in cases:
        base = normalized_volume(pts)
        for _ in range(3):
            shuffled = pts[:]
            rng.shuffle(shuffled)
            assert normalized_volume(shuffled) == base


def test_volume_counts_max_cones_for_complete_fans():
    for fan in (
        corpus.projective_line(),
        corpus.projective_plane(),
        corpus.p1_times_p1(),
        corpus.hirzebruch(1),
    ):
        pts = [tuple(0 for _ in range(fan.dim))] + list(fan.rays)
        assert normalized_volume(pts) == len(fan.max_cones)


def test_lattice_points_square():
    poly = LatticePolytope.from_points([(0, 0), (2, 0), (0, 2), (2, 2)])
    assert len(lattice_points(poly)) == 9
