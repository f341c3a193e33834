"""Affine semigroups: membership, saturation, Gorenstein shift, toric ideals.

The graded semigroups here all look like N A'' (first coordinate counts the
number of generators used), so membership is a finite knapsack search.  The
ungraded N A' is handled through unimodular subcone certificates plus a
graded lift, which is exact whenever the subcones cover the cone (that is
checked separately through the W-set volume identity).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from tglab.errors import BoundTooSmall, NotSaturated, UnboundedSearch
from tglab.intlinalg import IntegerMatrix, kernel_lattice
from tglab.polytopes import LatticePolytope, dilate, lattice_points
from tglab.rationalcone import cone_hform


@dataclass(frozen=True)
class AffineSemigroup:
    """Semigroup generated by the columns of ``generators``.

    ``graded`` marks that the first row of the generator matrix is all ones,
    so the first coordinate of any element counts generators with
    multiplicity.  ``cone_index_sets`` optionally lists generator index
    tuples that form unimodular bases (one per maximal cone of a fan);
    nonnegative integer coordinates in one of them certify membership.
    """

    generators: IntegerMatrix
    graded: bool = False
    cone_index_sets: tuple = ()

    @property
    def dim(self) -> int:
        return self.generators.rows

    @property
    def n_gens(self) -> int:
        return self.generators.cols

    def gen(self, i: int) -> tuple:
        return self.generators.col(i)


def from_columns(cols, graded=False, cone_index_sets=()) -> AffineSemigroup:
    mat = IntegerMatrix.from_rows([[c[i] for c in cols] for i in range(len(cols[0]))])
    return AffineSemigroup(mat, graded=graded, cone_index_sets=tuple(map(tuple, cone_index_sets)))


def _solve_unimodular(cols, v):
    """Integer coordinates of v in the basis given by cols (det +-1), or None."""
    n = len(v)
    mat = IntegerMatrix.from_rows([[c[i] for c in cols] for i in range(n)])
    det = mat.det()
    if abs(det) != 1:
        return None
    # Cramer's rule stays integral for unimodular matrices.
    coords = []
    for j in range(n):
        replaced = [
            [v[i] if k == j else cols[k][i] for k in range(n)] for i in range(n)
        ]
        coords.append(IntegerMatrix.from_rows(replaced).det() * det)
    return tuple(coords)


def semigroup_contains(S: AffineSemigroup, v, lift=None, lift_bound: int = 0) -> bool:
    """Exact membership for graded semigroups; certificate plus graded lift
    otherwise.

    ``lift`` is the graded semigroup whose degree-k slice projects onto S
    (columns (1, s_i) plus the free column (1, 0)); ``lift_bound`` caps the
    degrees tried.  Raises UnboundedSearch when no exact route exists.
    """
    v = tuple(int(x) for x in v)
    if len(v) != S.dim:
        raise ValueError("vector dimension mismatch")
    for idx_set in S.cone_index_sets:
        cols = [S.gen(i) for i in idx_set]
        coords = _solve_unimodular(cols, v)
        if coords is not None and all(c >= 0 for c in coords):
            return True
    if S.graded:
        return _graded_member(S, v)
    if lift is not None:
        for k in range(lift_bound + 1):
            if _graded_member(lift, (k,) + v):
                return True
        return False
    raise UnboundedSearch("no grading and no cone decomposition available")


_MEMBER_MEMO: dict = {}


def _graded_member(S: AffineSemigroup, v) -> bool:
    gens = [S.gen(i) for i in range(S.n_gens)]
    if any(g[0] <= 0 for g in gens):
        raise UnboundedSearch("grading row must be positive")
    memo = _MEMBER_MEMO.setdefault(S.generators.entries, {})

    def rec(u):
        if all(x == 0 for x in u):
            return True
        if u[0] <= 0:
            return False
        if u in memo:
            return memo[u]
        memo[u] = False
        for g in gens:
            if g[0] <= u[0] and rec(tuple(a - b for a, b in zip(u, g))):
                memo[u] = True
                break
        return memo[u]

    return rec(v)


def doubled_semigroup(aprime: IntegerMatrix) -> AffineSemigroup:
    """The graded semigroup on the columns (1,0) and (1, a'_i)."""
    cols = [(1,) + tuple(0 for _ in range(aprime.rows))]
    for j in range(aprime.cols):
        cols.append((1,) + aprime.col(j))
    return from_columns(cols, graded=True)


def degree_one_polytope(S: AffineSemigroup) -> LatticePolytope:
    """Hull of the degree-one slice of a graded semigroup (coordinates with
    the grading dropped)."""
    pts = [S.gen(i)[1:] for i in range(S.n_gens) if S.gen(i)[0] == 1]
    return LatticePolytope.from_points(pts)


def graded_slice_points(S: AffineSemigroup, k: int):
    """Lattice points of the cone of S at grading k, via the dilated hull."""
    base = degree_one_polytope(S)
    if k == 0:
        return [tuple(0 for _ in range(S.dim - 1))]
    dilated = LatticePolytope.from_points(dilate(list(base.points), k))
    return lattice_points(dilated)


def saturation_check(S: AffineSemigroup, degree_bound: int):
    """Compare semigroup membership against cone membership up to the bound.

    Returns (saturated_up_to_bound, witness); the witness is the first cone
    point that fails semigroup membership, scanned by grading then lex.
    """
    if not S.graded:
        raise UnboundedSearch("saturation check needs the graded form")
    for k in range(degree_bound + 1):
        for pt in graded_slice_points(S, k):
            full = (k,) + tuple(pt)
            if not _graded_member(S, full):
                return False, full
    return True, None


def interior_points_up_to(S: AffineSemigroup, degree_bound: int):
    """Interior lattice points of the cone of a graded semigroup, grading
    <= bound."""
    cols = [S.gen(i) for i in range(S.n_gens)]
    h = cone_hform(cols, S.dim)
    out = []
    for k in range(degree_bound + 1):
        for pt in graded_slice_points(S, k):
            full = (k,) + tuple(pt)
            if h.contains_interior(full):
                out.append(full)
    return out


def gorenstein_shift_check(S: AffineSemigroup, shift, degree_bound: int) -> bool:
    """Interior points at grading <= bound coincide with shift + semigroup.

    ``shift`` is the distinguished interior element (grading c+1 for the
    doubled total-space semigroup).  Requires saturation up to the bound.
    """
    ok, witness = saturation_check(S, degree_bound)
    if not ok:
        raise NotSaturated(f"not saturated up to {degree_bound}, witness {witness}")
    shift = tuple(int(x) for x in shift)
    interior = set(interior_points_up_to(S, degree_bound))
    shifted = set()
    for k in range(degree_bound - shift[0] + 1):
        for pt in graded_slice_points(S, k):
            full = (k,) + tuple(pt)
            if _graded_member(S, full):
                shifted.add(tuple(a + b for a, b in zip(full, shift)))
    return interior == shifted


def interior_shift_check_ungraded(
    S: AffineSemigroup, lift: AffineSemigroup, shift, degree_bound: int
) -> bool:
    """Interior of the cone of S equals shift + S, tested on all lattice
    points of the degree_bound-dilated hull of 0 and the generators.

    Exact when the unimodular subcones of S cover its cone, which is what
    the W-set volume identity certifies.
    """
    cols = [S.gen(i) for i in range(S.n_gens)]
    h = cone_hform(cols, S.dim)
    shift = tuple(int(x) for x in shift)
    zero = tuple(0 for _ in range(S.dim))
    box = LatticePolytope.from_points(dilate([zero] + cols, degree_bound))
    for pt in lattice_points(box):
        inside = h.contains_interior(pt)
        member = semigroup_contains(
            S,
            tuple(a - b for a, b in zip(pt, shift)),
            lift=lift,
            lift_bound=degree_bound * (S.dim + 2),
        )
        if inside != member:
            return False
    return True


def toric_ideal_binomials(B: IntegerMatrix, degree_bound: int):
    """Generators of the lattice ideal of ker(B), up to the degree bound.

    Enumerates lattice vectors as small combinations of the kernel basis,
    keeps a deglex-reduced generating set, and raises BoundTooSmall when
    candidates one step beyond the bound fail to reduce to zero.
    """
    basis = kernel_lattice(B)
    r = basis.rank
    t = B.cols
    if r == 0:
        return []

    def vectors(coeff_cap, deg_cap):
        seen = set()
        for coeffs in product(range(-coeff_cap, coeff_cap + 1), repeat=r):
            if all(c == 0 for c in coeffs):
                continue
            vec = tuple(
                sum(coeffs[a] * basis.basis.entries[i][a] for a in range(r))
                for i in range(t)
            )
            pos = sum(x for x in vec if x > 0)
            neg = -sum(x for x in vec if x < 0)
            if max(pos, neg) > deg_cap or vec in seen:
                continue
            seen.add(vec)
            yield vec

    def orient(vec):
        pos = tuple(max(x, 0) for x in vec)
        neg = tuple(max(-x, 0) for x in vec)
        return (pos, neg) if _deglex_bigger(pos, neg) else (neg, pos)

    gens = []

    def reduce_monomial(u):
        changed = True
        while changed:
            changed = False
            for big, small in gens:
                if all(a >= b for a, b in zip(u, big)):
                    u = tuple(a - b + c for a, b, c in zip(u, big, small))
                    changed = True
        return u

    def reduces_to_zero(pair):
        big, small = pair
        return reduce_monomial(big) == reduce_monomial(small)

    candidates = sorted(
        (orient(v) for v in vectors(degree_bound, degree_bound)),
        key=lambda p: (sum(p[0]), p[0], p[1]),
    )
    seen_pairs = set()
    for pair in candidates:
        if pair in seen_pairs:
            continue
        seen_pairs.add(pair)
        if not reduces_to_zero(pair):
            gens.append(pair)
    for vec in vectors(degree_bound + 1, degree_bound + 1):
        if not reduces_to_zero(orient(vec)):
            raise BoundTooSmall(
                "lattice ideal not stabilized within the degree bound"
            )
    return sorted(gens)


def _deglex_bigger(u, w) -> bool:
    return (sum(u), u) > (sum(w), w)
