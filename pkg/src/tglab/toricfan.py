"""Fans, total-space fans of split bundles, and nef cones two ways.

A fan is stored as primitive ray generators plus maximal cones given by
ray index sets.  Only simplicial full-dimensional maximal cones are
accepted.  The nef cone is computed both as an intersection of anticones
and as the cone of convex piecewise-linear functions; the two must agree
and the test suite checks that they do.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import gcd

from tglab.errors import (
    BundleNotNef,
    DimensionMismatch,
    IncompleteFan,
    InputNotSmooth,
    KahlerConeEmpty,
    NegativeCoefficient,
    NonPrimitiveRay,
)
from tglab.intlinalg import IntegerMatrix, kernel_lattice
from tglab.polytopes import normalized_volume, simplex_normalized_volume
from tglab.rationalcone import (
    HForm,
    RationalCone,
    _primitive,
    cone_hform,
    intersect_hforms,
)


@dataclass(frozen=True)
class Fan:
    """Rays are primitive integer vectors; max_cones are 0-based index tuples."""

    dim: int
    rays: tuple
    max_cones: tuple

    @staticmethod
    def make(rays, max_cones) -> "Fan":
        rays = tuple(tuple(int(x) for x in r) for r in rays)
        cones = tuple(tuple(sorted(int(i) for i in c)) for c in max_cones)
        dim = len(rays[0]) if rays else 0
        return Fan(dim, rays, cones)

    @property
    def n_rays(self) -> int:
        return len(self.rays)

    def ray_matrix(self) -> IntegerMatrix:
        """Matrix with the rays as columns."""
        return IntegerMatrix.from_rows(
            [[self.rays[j][i] for j in range(self.n_rays)] for i in range(self.dim)]
        )

    def cone_matrix(self, cone) -> IntegerMatrix:
        return IntegerMatrix.from_rows(
            [[self.rays[j][i] for j in cone] for i in range(self.dim)]
        )


@dataclass(frozen=True)
class FanDiagnostics:
    is_fan: bool
    smooth: bool
    complete: bool
    simplicial: bool


def _is_primitive(vec) -> bool:
    g = 0
    for x in vec:
        g = gcd(g, abs(x))
    return g == 1


_VALIDATE_CACHE: dict = {}


def validate_fan(fan: Fan) -> FanDiagnostics:
    """Check primitivity, the fan condition, smoothness and completeness.

    Completeness is decided combinatorially: every facet of every maximal
    cone is shared by exactly two maximal cones and the facet graph is
    connected.  Results are cached per fan (fans are immutable).
    """
    cached = _VALIDATE_CACHE.get(fan)
    if cached is not None:
        return cached
    result = _validate_fan_uncached(fan)
    _VALIDATE_CACHE[fan] = result
    return result


def _validate_fan_uncached(fan: Fan) -> FanDiagnostics:
    for r in fan.rays:
        if len(r) != fan.dim:
            raise DimensionMismatch("ray of wrong dimension")
        if not _is_primitive(r):
            raise NonPrimitiveRay(f"ray {r} is not primitive")
    for cone in fan.max_cones:
        if len(cone) != fan.dim:
            raise DimensionMismatch(
                f"maximal cone {cone} does not have {fan.dim} rays (non-simplicial "
                "or non-full-dimensional cones are not supported)"
            )
        if len(set(cone)) != len(cone) or any(i < 0 or i >= fan.n_rays for i in cone):
            raise DimensionMismatch(f"bad ray indices in cone {cone}")
    dets = [fan.cone_matrix(c).det() for c in fan.max_cones]
    if any(d == 0 for d in dets):
        return FanDiagnostics(False, False, False, True)
    smooth = all(abs(d) == 1 for d in dets)

    # Fan condition: pairwise intersections are common faces.
    is_fan = True
    hforms = [cone_hform([fan.rays[i] for i in c], fan.dim) for c in fan.max_cones]
    for (c1, h1), (c2, h2) in combinations(zip(fan.max_cones, hforms), 2):
        common = sorted(set(c1) & set(c2))
        inter = intersect_hforms([h1, h2])
        common_h = cone_hform([fan.rays[i] for i in common], fan.dim)
        probe = RationalCone.from_hform(inter)
        if not all(common_h.contains(g) for g in probe.generators):
            is_fan = False
            break

    complete = _is_complete(fan) if is_fan else False
    return FanDiagnostics(is_fan, smooth, complete, True)


def _is_complete(fan: Fan) -> bool:
    facet_count = {}
    for ci, cone in enumerate(fan.max_cones):
        for drop in cone:
            facet = frozenset(cone) - {drop}
            facet_count.setdefault(facet, []).append(ci)
    if any(len(v) != 2 for v in facet_count.values()):
        return False
    # facet-connectivity of the max-cone adjacency graph
    n = len(fan.max_cones)
    if n == 0:
        return False
    adj = {i: set() for i in range(n)}
    for members in facet_count.values():
        a, b = members
        adj[a].add(b)
        adj[b].add(a)
    seen = {0}
    stack = [0]
    while stack:
        cur = stack.pop()
        for nxt in adj[cur]:
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    return len(seen) == n


def total_space_fan(fan: Fan, d: IntegerMatrix, allow_negative: bool = False) -> Fan:
    """Fan of the total space of the dual split bundle given by rows of d.

    New rays are (a_i, d_i) for the old rays and the last c coordinate
    vectors; each old maximal cone picks up all c new rays.  Negative
    coefficients are rejected unless ``allow_negative`` is set; the
    negative-control examples need the raw ray construction.
    """
    c = d.rows
    if c and d.cols != fan.n_rays:
        raise DimensionMismatch("bundle matrix needs one column per ray")
    if not allow_negative and any(x < 0 for row in d.entries for x in row):
        raise NegativeCoefficient("bundle coefficients must be nonnegative")
    diag = validate_fan(fan)
    if not (diag.is_fan and diag.smooth and diag.complete):
        raise InputNotSmooth("total-space construction needs a smooth complete fan")
    if c == 0:
        return fan
    n, m = fan.dim, fan.n_rays
    rays = [tuple(fan.rays[i]) + tuple(d.entries[j][i] for j in range(c)) for i in range(m)]
    for j in range(c):
        rays.append(tuple(0 for _ in range(n + j)) + (1,) + tuple(0 for _ in range(c - j - 1)))
    cones = [tuple(cone) + tuple(range(m, m + c)) for cone in fan.max_cones]
    out = Fan.make(rays, cones)
    for cone in out.max_cones:
        if abs(out.cone_matrix(cone).det()) != 1:
            raise InputNotSmooth("total-space fan failed the smoothness check")
    return out


def pl_is_convex(fan: Fan, values) -> tuple:
    """(convex, strictly) for the PL function with the given ray values.

    Convex means value(a_i) <= linear extension from every maximal cone;
    strictly means strict for rays outside the cone.
    """
    diag = validate_fan(fan)
    if not diag.complete:
        raise IncompleteFan("convexity test needs a complete fan")
    return _pl_convex_raw(fan, values)


def _pl_convex_raw(fan: Fan, values) -> tuple:
    """Ray-comparison convexity test, no completeness gate (the total-space
    fan is never complete but the same inequalities define its nef classes)."""
    vals = [Fraction(v) for v in values]
    if len(vals) != fan.n_rays:
        raise DimensionMismatch("need one value per ray")
    convex = True
    strictly = True
    for cone in fan.max_cones:
        u = _linear_extension(fan, cone, vals)
        for i in range(fan.n_rays):
            lin = sum(u[k] * fan.rays[i][k] for k in range(fan.dim))
            if vals[i] > lin:
                convex = False
                strictly = False
            elif i not in cone and vals[i] == lin:
                strictly = False
    return convex, strictly


def _linear_extension(fan: Fan, cone, vals):
    """u with <u, a_i> = vals[i] for the rays of the cone (exact solve)."""
    n = fan.dim
    mat = [[Fraction(fan.rays[i][k]) for k in range(n)] for i in cone]
    rhs = [vals[i] for i in cone]
    aug = [row + [rhs[r]] for r, row in enumerate(mat)]
    for col in range(n):
        piv = next(i for i in range(col, n) if aug[i][col] != 0)
        aug[col], aug[piv] = aug[piv], aug[col]
        pv = aug[col][col]
        aug[col] = [x / pv for x in aug[col]]
        for i in range(n):
            if i != col and aug[i][col] != 0:
                f = aug[i][col]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[col])]
    return [aug[i][n] for i in range(n)]


def divisor_class_matrix(fan: Fan) -> IntegerMatrix:
    """Row i = coordinates of the i-th ray divisor class in the basis dual
    to the kernel-lattice basis of the ray matrix."""
    return kernel_lattice(fan.ray_matrix()).basis


def nef_cone_anticones(fan: Fan) -> RationalCone:
    """Nef cone as the intersection of anticones, in kernel-dual coordinates.

    The anticone of a maximal cone is generated by the divisor classes of
    the rays outside it.  Raises KahlerConeEmpty when the intersection has
    empty interior.
    """
    diag = validate_fan(fan)
    if not diag.complete:
        raise IncompleteFan("nef cone needs a complete fan")
    classes = divisor_class_matrix(fan)
    r = classes.cols
    forms = []
    for cone in fan.max_cones:
        outside = [classes.row(i) for i in range(fan.n_rays) if i not in cone]
        forms.append(cone_hform(outside, r))
    inter = intersect_hforms(forms)
    nef = RationalCone.from_hform(inter)
    if inter.equalities or not nef.generators:
        raise KahlerConeEmpty("nef cone has empty interior")
    interior_probe = tuple(sum(col) for col in zip(*nef.generators))
    if not inter.contains_interior(interior_probe):
        raise KahlerConeEmpty("nef cone has empty interior")
    return nef


def nef_cone_pl(fan: Fan) -> RationalCone:
    """Nef cone as the image of the cone of convex PL functions.

    A class c (kernel-dual coordinates) is nef iff one (hence any) divisor
    representative t with classes^T t = c gives a convex PL function with
    values -t_i.  The inequalities are assembled from one rational section
    of the representative map, so the result is an exact H-form cone.
    """
    diag = validate_fan(fan)
    if not diag.complete:
        raise IncompleteFan("nef cone needs a complete fan")
    classes = divisor_class_matrix(fan)
    m, r = classes.rows, classes.cols
    section = _rational_right_inverse(classes)
    # t(c) = section * c; psi values are -t_i(c); inequality per (cone, ray):
    # psi_sigma(a_i) - psi(a_i) >= 0, a linear functional of c.
    ineqs = []
    for cone in fan.max_cones:
        for i in range(fan.n_rays):
            coeffs = []
            for b in range(r):
                unit_t = [section[row][b] for row in range(m)]
                vals = [-x for x in unit_t]
                u = _linear_extension(fan, cone, [Fraction(v) for v in vals])
                lin = sum(u[k] * fan.rays[i][k] for k in range(fan.dim))
                coeffs.append(lin - vals[i])
            ineqs.append(tuple(coeffs))
    prim = [_primitive(tuple(Fraction(x) for x in v)) for v in ineqs]
    dedup = []
    for v in prim:
        if any(x != 0 for x in v) and v not in dedup:
            dedup.append(v)
    return RationalCone.from_hform(HForm(r, (), tuple(dedup)))


def _rational_right_inverse(classes: IntegerMatrix):
    """Any rational section S (m x r) with classes^T S = I_r."""
    m, r = classes.rows, classes.cols
    # Solve classes^T * S = I_r column by column.
    ct = classes.transpose()  # r x m
    cols = []
    for b in range(r):
        rhs = [Fraction(int(i == b)) for i in range(r)]
        aug = [[Fraction(ct.entries[i][j]) for j in range(m)] + [rhs[i]] for i in range(r)]
        pivots = []
        pr = 0
        for col in range(m):
            piv = next((i for i in range(pr, r) if aug[i][col] != 0), None)
            if piv is None:
                continue
            aug[pr], aug[piv] = aug[piv], aug[pr]
            pv = aug[pr][col]
            aug[pr] = [x / pv for x in aug[pr]]
            for i in range(r):
                if i != pr and aug[i][col] != 0:
                    f = aug[i][col]
                    aug[i] = [a - f * b2 for a, b2 in zip(aug[i], aug[pr])]
            pivots.append(col)
            pr += 1
        sol = [Fraction(0)] * m
        for row_i, pc in enumerate(pivots):
            sol[pc] = aug[row_i][m]
        cols.append(sol)
    return [[cols[b][i] for b in range(r)] for i in range(m)]


def class_is_nef(fan: Fan, divisor_coeffs) -> bool:
    """Nef test for the divisor sum(t_i D_i): PL values -t_i convex."""
    vals = [-Fraction(t) for t in divisor_coeffs]
    convex, _ = pl_is_convex(fan, vals)
    return convex


def nef_cone_pullback_check(fan: Fan, d: IntegerMatrix) -> bool:
    """Nef cone of the total-space fan equals the nef cone of the base,
    after identifying the relation lattices by the extension isomorphism."""
    total = total_space_fan(fan, d)
    base_kernel = kernel_lattice(fan.ray_matrix()).basis
    from tglab.intlinalg import extend_relation

    ext_cols = [extend_relation(base_kernel.col(a), d) for a in range(base_kernel.cols)]
    ext_basis = IntegerMatrix.from_rows(
        [[ext_cols[a][i] for a in range(len(ext_cols))] for i in range(fan.n_rays + d.rows)]
    )
    # Anticones of the total fan in the coordinates of the extended basis.
    r = ext_basis.cols
    forms = []
    for cone in total.max_cones:
        outside = [ext_basis.row(i) for i in range(total.n_rays) if i not in cone]
        forms.append(cone_hform(outside, r))
    nef_total = RationalCone.from_hform(intersect_hforms(forms))
    nef_base = nef_cone_anticones(fan)
    return nef_total.equals(nef_base)


def anticanonical_consistency_check(fan: Fan, d: IntegerMatrix) -> bool:
    """The total-space anticanonical class (PL value -1 on every ray) is nef
    exactly when the base class -K - sum of bundle classes is nef."""
    total = total_space_fan(fan, d)
    total_nef, _ = _pl_convex_raw(total, [-1] * total.n_rays)
    coeffs = [1 - sum(d.entries[j][i] for j in range(d.rows)) for i in range(fan.n_rays)]
    base_nef = class_is_nef(fan, coeffs)
    return total_nef == base_nef


def _aprime_rays(fan: Fan, d: IntegerMatrix):
    total = total_space_fan(fan, d, allow_negative=True)
    return total, list(total.rays)


def conv_in_support_check(fan: Fan, d: IntegerMatrix) -> bool:
    """Hull of 0 and all total-space rays sits inside the fan support.

    Decided on vertices and barycenters of every vertex simplex, each point
    tested for membership in some maximal cone.
    """
    for j in range(d.rows):
        if not class_is_nef(fan, d.row(j)):
            raise BundleNotNef(f"bundle row {j} is not nef")
    total, rays = _aprime_rays(fan, d)
    dim = total.dim
    zero = tuple(0 for _ in range(dim))
    pts = [zero] + rays
    cone_hforms = [
        cone_hform([total.rays[i] for i in c], dim) for c in total.max_cones
    ]

    def in_support(x):
        return any(h.contains(x) for h in cone_hforms)

    for size in range(1, dim + 2):
        for subset in combinations(range(len(pts)), size):
            bary = tuple(
                Fraction(sum(pts[i][k] for i in subset), size) for k in range(dim)
            )
            if not in_support(bary):
                return False
    return True


def w_set_convexity(fan: Fan, d: IntegerMatrix) -> bool:
    """The union of per-cone hulls equals the full hull of 0 and all rays.

    The pieces project into distinct maximal cones of the base fan, so
    their interiors are disjoint and the union equals the hull iff the
    normalized volumes agree.
    """
    total, rays = _aprime_rays(fan, d)
    dim = total.dim
    zero = tuple(0 for _ in range(dim))
    hull_vol = normalized_volume([zero] + rays)
    pieces = 0
    for cone in total.max_cones:
        pieces += simplex_normalized_volume([zero] + [total.rays[i] for i in cone])
    return pieces == hull_vol
