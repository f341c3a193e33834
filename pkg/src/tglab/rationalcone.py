"""Finitely generated cones over Q, done by brute force at desk scale.

A cone is handled either through generators (V-form) or through a pair
(equalities, inequalities) of primitive integer normals (H-form).  All
conversions enumerate small subsets of generators or constraints, which is
exact and fast for the dimensions (<= 5) and sizes (<= ~20 vectors) this
package meets.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import gcd


def _as_fraction_vec(v):
    return tuple(Fraction(x) for x in v)


def _primitive(v):
    """Scale a rational vector to a primitive integer vector."""
    den = 1
    for x in v:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, abs(x))
    if g > 1:
        ints = [x // g for x in ints]
    return tuple(ints)


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def nullspace(rows, dim):
    """Basis of {x : r . x = 0 for all rows r}, primitive integer vectors."""
    mat = [list(_as_fraction_vec(r)) for r in rows]
    pivots = []
    pivot_row = 0
    for col in range(dim):
        piv = next((i for i in range(pivot_row, len(mat)) if mat[i][col] != 0), None)
        if piv is None:
            continue
        mat[pivot_row], mat[piv] = mat[piv], mat[pivot_row]
        pv = mat[pivot_row][col]
        mat[pivot_row] = [x / pv for x in mat[pivot_row]]
        for i in range(len(mat)):
            if i != pivot_row and mat[i][col] != 0:
                f = mat[i][col]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[pivot_row])]
        pivots.append(col)
        pivot_row += 1
    free = [c for c in range(dim) if c not in pivots]
    basis = []
    for fc in free:
        vec = [Fraction(0)] * dim
        vec[fc] = Fraction(1)
        for row_i, pc in enumerate(pivots):
            vec[pc] = -mat[row_i][fc]
        basis.append(_primitive(vec))
    return basis


def rank(rows, dim) -> int:
    return dim - len(nullspace(rows, dim))


@dataclass(frozen=True)
class HForm:
    """Cone {x : e.x = 0 for e in equalities, n.x >= 0 for n in inequalities}."""

    dim: int
    equalities: tuple
    inequalities: tuple

    def contains(self, x) -> bool:
        x = _as_fraction_vec(x)
        return all(_dot(e, x) == 0 for e in self.equalities) and all(
            _dot(n, x) >= 0 for n in self.inequalities
        )

    def contains_interior(self, x) -> bool:
        """Strict interior relative to the ambient space."""
        x = _as_fraction_vec(x)
        if self.equalities:
            return False
        return all(_dot(n, x) > 0 for n in self.inequalities)


def cone_hform(generators, dim) -> HForm:
    """H-form of the cone generated by the given vectors."""
    gens = [_as_fraction_vec(g) for g in generators if any(x != 0 for x in g)]
    eqs = nullspace(gens, dim)
    if not gens:
        return HForm(dim, tuple(eqs), ())
    span_dim = dim - len(eqs)
    ineqs = set()
    if span_dim == 0:
        return HForm(dim, tuple(eqs), ())
    for subset in combinations(range(len(gens)), span_dim - 1):
        rows = [gens[i] for i in subset] + list(eqs)
        normals = nullspace(rows, dim)
        if len(normals) != 1:
            continue
        n = normals[0]
        pos = sum(1 for g in gens if _dot(n, g) > 0)
        neg = sum(1 for g in gens if _dot(n, g) < 0)
        if pos and not neg:
            ineqs.add(n)
        elif neg and not pos:
            ineqs.add(tuple(-x for x in n))
    return HForm(dim, tuple(eqs), tuple(sorted(ineqs)))


def cone_contains(generators, x, dim) -> bool:
    return cone_hform(generators, dim).contains(x)


def extreme_rays(h: HForm):
    """Primitive generators of the extreme rays of a pointed H-form cone."""
    dim = h.dim
    sol_dim = len(nullspace(list(h.equalities), dim))
    rays = set()
    if sol_dim == 0:
        return []
    # Rank dim-1 active sets always contain a spanning subset of size <= dim.
    for size in range(0, min(len(h.inequalities), dim) + 1):
        for subset in combinations(range(len(h.inequalities)), size):
            rows = list(h.equalities) + [h.inequalities[i] for i in subset]
            sols = nullspace(rows, dim)
            if len(sols) != 1:
                continue
            for cand in (sols[0], tuple(-x for x in sols[0])):
                if h.contains(cand) and any(x != 0 for x in cand):
                    rays.add(cand)
    # Filter non-extreme rays: r is extreme iff it is not a positive
    # combination of the others (equivalently its active set is maximal).
    rays = sorted(rays)
    extreme = []
    for r in rays:
        active = frozenset(
            i for i, n in enumerate(h.inequalities) if _dot(n, _as_fraction_vec(r)) == 0
        )
        dominated = False
        for other in rays:
            if other == r:
                continue
            oactive = frozenset(
                i for i, n in enumerate(h.inequalities) if _dot(n, _as_fraction_vec(other)) == 0
            )
            if active < oactive:
                dominated = True
                break
        if not dominated:
            extreme.append(r)
    # Drop rays that are nonnegative combinations of the remaining ones.
    final = []
    for i, r in enumerate(extreme):
        others = [x for j, x in enumerate(extreme) if j != i]
        if not others or not cone_contains(others, r, dim):
            final.append(r)
    return sorted(final)


def intersect_hforms(forms):
    dim = forms[0].dim
    eqs = []
    ineqs = []
    for f in forms:
        if f.dim != dim:
            raise ValueError("dimension mismatch in cone intersection")
        eqs.extend(f.equalities)
        ineqs.extend(f.inequalities)
    seen_e, seen_i = [], []
    for e in eqs:
        if e not in seen_e:
            seen_e.append(e)
    for n in ineqs:
        if n not in seen_i:
            seen_i.append(n)
    return HForm(dim, tuple(seen_e), tuple(seen_i))


def cones_equal(gens_a, gens_b, dim) -> bool:
    """Set equality of two finitely generated cones, by mutual membership."""
    ha = cone_hform(gens_a, dim)
    hb = cone_hform(gens_b, dim)
    return all(hb.contains(g) for g in gens_a) and all(ha.contains(g) for g in gens_b)


@dataclass(frozen=True)
class RationalCone:
    """A finitely generated rational cone kept in both forms."""

    dim: int
    generators: tuple
    hform: HForm

    @staticmethod
    def from_generators(generators, dim) -> "RationalCone":
        gens = tuple(_primitive(_as_fraction_vec(g)) for g in generators if any(g))
        return RationalCone(dim, gens, cone_hform(gens, dim))

    @staticmethod
    def from_hform(h: HForm) -> "RationalCone":
        rays = tuple(extreme_rays(h))
        return RationalCone(h.dim, rays, h)

    def contains(self, x) -> bool:
        return self.hform.contains(x)

    def is_full_dimensional(self) -> bool:
        return not self.hform.equalities

    def equals(self, other: "RationalCone") -> bool:
        return all(other.contains(g) for g in self.generators) and all(
            self.contains(g) for g in other.generators
        )
