"""Assembly of all derived data for one (fan, bundle rows) pair.

This is the glue used by the command line front end, the demos and the
acceptance tests: total-space fan, the three matrices and their kernels,
the section system rebased to a nef basis of the dual relation lattice,
the cohomology ring of the base, the torus coordinate change and the
quantum-D-module generators.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from tglab.errors import BasisConditionFailed, BasisNotNef, KahlerConeEmpty
from tglab.cohomring import CohomologyRing, build_ring, chern_data
from tglab.intlinalg import (
    IntegerMatrix,
    extend_relation,
    homogenize,
    kernel_lattice,
    section_system,
    _unimodular_inverse,
)
from tglab.rationalcone import HForm, RationalCone, cone_hform, intersect_hforms
from tglab.toricfan import Fan, total_space_fan
from tglab.weylops import (
    TorusChange,
    qdm_box,
    qdm_context,
    qdm_euler,
    star_n_generators,
)


def nef_hform(n_rays: int, max_cones, class_matrix: IntegerMatrix) -> HForm:
    """Intersection of anticones in the coordinates of class_matrix rows."""
    r = class_matrix.cols
    forms = []
    for cone in max_cones:
        outside = [class_matrix.row(i) for i in range(n_rays) if i not in cone]
        forms.append(cone_hform(outside, r))
    return intersect_hforms(forms)


@dataclass
class MirrorModel:
    fan: Fan
    d: IntegerMatrix
    total: Fan
    A: IntegerMatrix
    Aprime: IntegerMatrix
    Adoubleprime: IntegerMatrix
    kernel_ext: IntegerMatrix      # extended kernel basis of A'
    L: IntegerMatrix               # kernel basis rebased to the nef basis p
    M: IntegerMatrix               # retraction with M L = I
    C: IntegerMatrix               # section of A'
    basis_U: IntegerMatrix         # rows: p_a in the extended-basis coordinates
    ring: CohomologyRing = field(repr=False)
    chern: dict = field(repr=False)

    @property
    def m(self) -> int:
        return self.fan.n_rays

    @property
    def c(self) -> int:
        return self.d.rows

    @property
    def r(self) -> int:
        return self.L.cols

    def torus_change(self) -> TorusChange:
        return TorusChange(C=self.C, L=self.L, M=self.M, Aprime=self.Aprime, m=self.m)

    def qdm_generators(self):
        ctx = qdm_context(self.r)
        boxes = []
        for a in range(self.r):
            l_vec = self.L.col(a)
            coords = tuple(int(b == a) for b in range(self.r))
            boxes.append(qdm_box(ctx, self.L, self.m, coords, l_vec))
        return {"ctx": ctx, "boxes": boxes, "euler": qdm_euler(ctx, self.L)}

    def qdm_box_for(self, coords):
        """Q_l for a relation given by its coordinates in the p basis."""
        ctx = qdm_context(self.r)
        l_vec = self.L.mul_vec(coords)
        return qdm_box(ctx, self.L, self.m, tuple(int(x) for x in coords), l_vec)

    def star_generators(self, beta0_beta=None):
        if beta0_beta is None:
            beta0_beta = [0] * (1 + self.Aprime.rows)
        return star_n_generators(self.Aprime, beta0_beta, self.m, kernel_basis=self.L)

    def i_table(self, d_max: int):
        from tglab.qdmcheck import i_function

        return i_function(self.ring, self.L, self.m, d_max)


def build_model(fan: Fan, d: IntegerMatrix, basis_p=None) -> MirrorModel:
    """Construct the full derived data; raises the basis errors when the
    requested (or auto-selected) nef basis fails its conditions."""
    total = total_space_fan(fan, d)
    A = fan.ray_matrix()
    Aprime = total.ray_matrix()
    Adp = homogenize(Aprime)
    base_kernel = kernel_lattice(A).basis
    ext_cols = [extend_relation(base_kernel.col(a), d) for a in range(base_kernel.cols)]
    t = Aprime.cols
    kernel_ext = IntegerMatrix.from_rows(
        [[ext_cols[a][i] for a in range(len(ext_cols))] for i in range(t)]
    )
    sec = section_system(Aprime)
    # Rebase the section kernel to the extended basis (both span ker A').
    G = sec.M.mul(kernel_ext)  # unimodular: kernel_ext = sec.L * G
    M_ext = _unimodular_inverse(G).mul(sec.M)
    r = kernel_ext.cols
    nef = nef_hform(total.n_rays, total.max_cones, kernel_ext)
    if basis_p is None:
        rays = RationalCone.from_hform(nef).generators
        if len(rays) != r:
            raise BasisNotNef(
                "nef cone is not simplicial in rank; provide basis_p explicitly"
            )
        U = IntegerMatrix.from_rows(sorted(rays))
    else:
        pi = IntegerMatrix.from_rows(basis_p)
        if pi.rows != r or pi.cols != fan.n_rays:
            raise BasisNotNef("basis_p must be r rows of ray-divisor coefficients")
        U = pi.mul(kernel_ext.submatrix(range(fan.n_rays), range(r)))
    if abs(U.det()) != 1:
        raise BasisNotNef("requested basis is not a lattice basis of the dual")
    for a in range(r):
        if not nef.contains(U.row(a)):
            raise BasisNotNef(f"basis vector {a} lies outside the nef cone")
    if not nef.inequalities and not nef.equalities:
        raise KahlerConeEmpty("nef cone computation degenerated")
    total_class = tuple(
        sum(kernel_ext.entries[i][a] for i in range(t)) for a in range(r)
    )
    if not cone_hform([U.row(a) for a in range(r)], r).contains(total_class):
        raise BasisConditionFailed(
            "sum of the divisor classes is not a nonnegative combination of the basis"
        )
    Uinv = _unimodular_inverse(U)
    L_fin = kernel_ext.mul(Uinv)
    M_fin = U.mul(M_ext)
    ring = build_ring(fan)
    chern = chern_data(ring, d)
    return MirrorModel(
        fan=fan,
        d=d,
        total=total,
        A=A,
        Aprime=Aprime,
        Adoubleprime=Adp,
        kernel_ext=kernel_ext,
        L=L_fin,
        M=M_fin,
        C=sec.C,
        basis_U=U,
        ring=ring,
        chern=chern,
    )
