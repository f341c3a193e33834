"""Stanley-Reisner cohomology rings of smooth complete toric varieties.

The ring is Q[x_1..x_m] modulo the linear relations (rows of the ray
matrix) and the squarefree monomials of minimal non-faces.  The finite
monomial basis and all normal forms come from graded exact linear algebra;
there is no Groebner machinery.  Classes are plain dicts mapping basis
monomials (exponent tuples) to rationals.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, combinations_with_replacement

from tglab.errors import FanNotSmoothComplete
from tglab.intlinalg import IntegerMatrix
from tglab.toricfan import Fan, validate_fan


def _monomials(m, d):
    """Exponent tuples of degree d in m variables, lexicographic."""
    if d == 0:
        return [tuple(0 for _ in range(m))]
    out = []
    for combo in combinations_with_replacement(range(m), d):
        exp = [0] * m
        for i in combo:
            exp[i] += 1
        out.append(tuple(exp))
    return sorted(set(out), reverse=True)


def minimal_nonfaces(fan: Fan):
    """Minimal ray index sets that span no cone of the fan."""
    cones = [frozenset(c) for c in fan.max_cones]
    nonfaces = []
    for size in range(1, fan.n_rays + 1):
        for subset in combinations(range(fan.n_rays), size):
            s = frozenset(subset)
            if any(s <= c for c in cones):
                continue
            if any(nf < s for nf in nonfaces):
                continue
            nonfaces.append(s)
    return sorted(tuple(sorted(s)) for s in nonfaces)


@dataclass
class CohomologyRing:
    """Finite presentation of the rational cohomology of a toric variety."""

    fan: Fan
    basis: tuple                 # monomial exponent tuples, all degrees
    basis_by_degree: dict        # degree -> list of basis monomials
    nf_table: dict = field(repr=False)  # monomial -> {basis monomial: coeff}
    point_monomial: tuple = ()
    point_scale: Fraction = Fraction(1)

    @property
    def dimension(self) -> int:
        return len(self.basis)

    @property
    def top_degree(self) -> int:
        return self.fan.dim

    def zero(self):
        return {}

    def one(self):
        unit = tuple(0 for _ in range(self.fan.n_rays))
        return {unit: Fraction(1)}

    def normal_form(self, monomial):
        deg = sum(monomial)
        if deg > self.top_degree:
            return {}
        return dict(self.nf_table[monomial])

    def divisor_class(self, i):
        exp = [0] * self.fan.n_rays
        exp[i] = 1
        return self.normal_form(tuple(exp))

    def combination(self, coeffs):
        """Class sum(coeffs[i] * D_i)."""
        out = {}
        for i, c in enumerate(coeffs):
            if not c:
                continue
            for mono, v in self.divisor_class(i).items():
                out[mono] = out.get(mono, Fraction(0)) + Fraction(c) * v
        return {k: v for k, v in out.items() if v}

    def mul(self, c1, c2):
        out = {}
        for m1, v1 in c1.items():
            for m2, v2 in c2.items():
                prod = tuple(a + b for a, b in zip(m1, m2))
                for mono, v in self.normal_form(prod).items():
                    out[mono] = out.get(mono, Fraction(0)) + v1 * v2 * v
        return {k: v for k, v in out.items() if v}

    def scale(self, c, factor):
        factor = Fraction(factor)
        return {k: v * factor for k, v in c.items() if v * factor}

    def add(self, c1, c2):
        out = dict(c1)
        for k, v in c2.items():
            out[k] = out.get(k, Fraction(0)) + v
        return {k: v for k, v in out.items() if v}

    def integrate(self, c) -> Fraction:
        """Coefficient on the point class (the top basis monomial scaled so
        that a smooth cone's divisor product integrates to one)."""
        return c.get(self.point_monomial, Fraction(0)) / self.point_scale

    def matrix_of_multiplication(self, c):
        """Matrix of cup product with c over the monomial basis."""
        cols = []
        for b in self.basis:
            col_class = self.mul({b: Fraction(1)}, c)
            cols.append([col_class.get(bb, Fraction(0)) for bb in self.basis])
        return [[cols[j][i] for j in range(len(self.basis))] for i in range(len(self.basis))]


def build_ring(fan: Fan) -> CohomologyRing:
    """Compute the monomial basis and normal forms by graded elimination."""
    diag = validate_fan(fan)
    if not (diag.is_fan and diag.smooth and diag.complete):
        raise FanNotSmoothComplete("cohomology ring needs a smooth complete fan")
    m, n = fan.n_rays, fan.dim
    A = fan.ray_matrix()
    nonfaces = minimal_nonfaces(fan)
    basis_by_degree = {}
    nf_table = {}
    for d in range(n + 2):
        monos = _monomials(m, d)
        index = {mono: i for i, mono in enumerate(monos)}
        rows = []
        if d >= 1:
            for k in range(n):
                for mu in _monomials(m, d - 1):
                    row = [Fraction(0)] * len(monos)
                    for i in range(m):
                        if A.entries[k][i]:
                            exp = list(mu)
                            exp[i] += 1
                            row[index[tuple(exp)]] += Fraction(A.entries[k][i])
                    rows.append(row)
        for nf in nonfaces:
            size = len(nf)
            if size > d:
                continue
            for mu in _monomials(m, d - size):
                exp = list(mu)
                for i in nf:
                    exp[i] += 1
                row = [Fraction(0)] * len(monos)
                row[index[tuple(exp)]] = Fraction(1)
                rows.append(row)
        pivots, rref = _row_reduce(rows, len(monos))
        free_cols = [j for j in range(len(monos)) if j not in pivots]
        if d > n and free_cols:
            raise FanNotSmoothComplete("ring does not vanish above the top degree")
        basis_by_degree[d] = [monos[j] for j in free_cols]
        for j, mono in enumerate(monos):
            if j in pivots:
                row = rref[pivots.index(j)]
                nf_table[mono] = {
                    monos[k]: -row[k] for k in free_cols if row[k]
                }
            else:
                nf_table[mono] = {mono: Fraction(1)}
    basis = tuple(mono for d in range(n + 1) for mono in basis_by_degree[d])
    ring = CohomologyRing(
        fan=fan,
        basis=basis,
        basis_by_degree={d: list(v) for d, v in basis_by_degree.items() if d <= n},
        nf_table=nf_table,
    )
    if len(basis_by_degree[n]) != 1:
        raise FanNotSmoothComplete("top graded piece is not one-dimensional")
    if ring.dimension != len(fan.max_cones):
        raise FanNotSmoothComplete("ring dimension != number of maximal cones")
    # Point class: the divisor product over the rays of the first maximal cone.
    exp = [0] * m
    for i in fan.max_cones[0]:
        exp[i] += 1
    pt = ring.normal_form(tuple(exp))
    top_mono = basis_by_degree[n][0]
    ring.point_monomial = top_mono
    ring.point_scale = pt[top_mono]
    return ring


def _row_reduce(rows, ncols):
    """Reduced row echelon form; returns (pivot column list, rows)."""
    mat = [list(r) for r in rows if any(x != 0 for x in r)]
    pivots = []
    pr = 0
    for col in range(ncols):
        piv = next((i for i in range(pr, len(mat)) if mat[i][col] != 0), None)
        if piv is None:
            continue
        mat[pr], mat[piv] = mat[piv], mat[pr]
        pv = mat[pr][col]
        mat[pr] = [x / pv for x in mat[pr]]
        for i in range(len(mat)):
            if i != pr and mat[i][col] != 0:
                f = mat[i][col]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[pr])]
        pivots.append(col)
        pr += 1
    return pivots, mat[: len(pivots)]


def chern_data(ring: CohomologyRing, d: IntegerMatrix):
    """First Chern classes of the bundle rows, their product, and the
    difference class sum D_i - sum c1(L_j)."""
    c1 = []
    for j in range(d.rows):
        c1.append(ring.combination(d.row(j)))
    ctop = ring.one()
    for cls in c1:
        ctop = ring.mul(ctop, cls)
    euler = ring.combination(
        [1 - sum(d.entries[j][i] for j in range(d.rows)) for i in range(ring.fan.n_rays)]
    )
    return {"c1": c1, "c_top": ctop, "euler_class": euler}


def twisted_pairing(ring: CohomologyRing, c_top, g1, g2) -> Fraction:
    return ring.integrate(ring.mul(ring.mul(g1, g2), c_top))


def kernel_of_multiplication(ring: CohomologyRing, c):
    """Basis of ker(m_c) as coefficient vectors over the monomial basis."""
    mat = ring.matrix_of_multiplication(c)
    ncols = len(ring.basis)
    from tglab.rationalcone import nullspace

    return nullspace([tuple(row) for row in mat], ncols)


def reduced_ring(ring: CohomologyRing, c_top):
    """Quotient by ker(m_{c_top}): representative basis monomials, the
    projection, and the induced (nondegenerate) pairing matrix."""
    kern = kernel_of_multiplication(ring, c_top)
    pivots, rref = _row_reduce([[Fraction(x) for x in v] for v in kern], len(ring.basis))
    keep = [j for j in range(len(ring.basis)) if j not in pivots]

    def project(cls):
        vec = [cls.get(b, Fraction(0)) for b in ring.basis]
        for row_i, p in enumerate(pivots):
            if vec[p]:
                f = vec[p]
                vec = [a - f * b for a, b in zip(vec, rref[row_i])]
        return {ring.basis[j]: vec[j] for j in keep if vec[j]}

    reps = [ring.basis[j] for j in keep]
    pairing = [
        [
            twisted_pairing(ring, c_top, {bi: Fraction(1)}, {bj: Fraction(1)})
            for bj in reps
        ]
        for bi in reps
    ]
    nondegenerate = _det(pairing) != 0
    return {
        "basis": reps,
        "project": project,
        "pairing_matrix": pairing,
        "nondegenerate": nondegenerate,
        "kernel_rank": len(kern),
    }


def _det(mat):
    n = len(mat)
    if n == 0:
        return Fraction(1)
    m = [row[:] for row in mat]
    det = Fraction(1)
    for col in range(n):
        piv = next((i for i in range(col, n) if m[i][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = -det
        det *= m[col][col]
        pv = m[col][col]
        m[col] = [x / pv for x in m[col]]
        for i in range(col + 1, n):
            if m[i][col]:
                f = m[i][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[col])]
    return det


def grading_mu(ring: CohomologyRing, c: int):
    """Diagonal weights (monomial degree) - (dim - rank)/2 per basis element."""
    shift = Fraction(ring.fan.dim - c, 2)
    return [Fraction(sum(b)) - shift for b in ring.basis]
