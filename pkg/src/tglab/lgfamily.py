"""Laurent-polynomial families, their Kaehler-moduli restriction, Jacobian
quotients, face critical systems and the good-parameter classifier.

The Jacobian quotient dimension uses the weight filtration by dilates of
the Newton polytope and exact sparse linear algebra over Q; the parameter
classifier combines that dimension test with a finite-field search for
torus solutions of the face critical systems (numpy does the modular
vectorization; everything else is exact).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm

import numpy as np

from tglab.errors import (
    StabilizationFailed,
    UnboundedSearch,
    ZeroCoefficient,
)
from tglab.intlinalg import IntegerMatrix
from tglab.polytopes import LatticePolytope, dilate, lattice_points
from tglab.semigroups import _solve_unimodular


class LaurentPoly:
    """Sparse Laurent polynomial with Fraction coefficients."""

    __slots__ = ("nvars", "coeffs")

    def __init__(self, nvars, coeffs=None):
        self.nvars = nvars
        self.coeffs = {}
        if coeffs:
            for k, v in coeffs.items():
                v = Fraction(v)
                if v:
                    self.coeffs[tuple(k)] = self.coeffs.get(tuple(k), Fraction(0)) + v
            self.coeffs = {k: v for k, v in self.coeffs.items() if v}

    @staticmethod
    def monomial(nvars, exps, coeff=1):
        return LaurentPoly(nvars, {tuple(exps): Fraction(coeff)})

    def __add__(self, other):
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, Fraction(0)) + v
        return LaurentPoly(self.nvars, out)

    def __sub__(self, other):
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, Fraction(0)) - v
        return LaurentPoly(self.nvars, out)

    def __mul__(self, other):
        out = {}
        for k1, v1 in self.coeffs.items():
            for k2, v2 in other.coeffs.items():
                k = tuple(a + b for a, b in zip(k1, k2))
                out[k] = out.get(k, Fraction(0)) + v1 * v2
        return LaurentPoly(self.nvars, out)

    def scale(self, c):
        return LaurentPoly(self.nvars, {k: v * Fraction(c) for k, v in self.coeffs.items()})

    def log_derivative(self, k):
        """y_k d/dy_k."""
        return LaurentPoly(
            self.nvars, {e: v * e[k] for e, v in self.coeffs.items() if e[k]}
        )

    def substitute(self, values):
        """Evaluate at rational values (all variables)."""
        total = Fraction(0)
        for e, v in self.coeffs.items():
            term = v
            for x, p in zip(values, e):
                term *= Fraction(x) ** p
            total += term
        return total

    def is_zero(self):
        return not self.coeffs

    def __eq__(self, other):
        return (
            isinstance(other, LaurentPoly)
            and self.nvars == other.nvars
            and self.coeffs == other.coeffs
        )

    def __repr__(self):
        if not self.coeffs:
            return "0"
        bits = []
        for e, v in sorted(self.coeffs.items()):
            bits.append(f"{v}*y^{e}")
        return " + ".join(bits)


def build_family(B: IntegerMatrix) -> LaurentPoly:
    """First component of the family: -sum_i lambda_i y^{b_i}, a Laurent
    polynomial in (y_1..y_s, lambda_1..lambda_t)."""
    s, t = B.rows, B.cols
    out = LaurentPoly(s + t)
    for i in range(t):
        exps = list(B.col(i)) + [0] * t
        exps[s + i] = 1
        out = out - LaurentPoly.monomial(s + t, exps)
    return out


def km_section_signs(m: int, t: int):
    """The sign twist: +1 on the first m variables, -1 on the bundle ones."""
    return tuple(1 if i < m else -1 for i in range(t))


def restrict_to_km(B: IntegerMatrix, M: IntegerMatrix, m: int) -> LaurentPoly:
    """The affine family over the Kaehler moduli torus:
    -sum_{i<=m} q^{m_i} y^{b_i} + sum_{i>m} q^{m_i} y^{b_i} in (y, q)."""
    s, t = B.rows, B.cols
    r = M.rows
    out = LaurentPoly(s + r)
    for i in range(t):
        exps = list(B.col(i)) + list(M.col(i))
        sign = -1 if i < m else 1
        out = out + LaurentPoly.monomial(s + r, exps, sign)
    return out


def substitute_km_parameters(family: LaurentPoly, s: int, t: int, M: IntegerMatrix, m: int, q_values):
    """Evaluate the abstract family at lambda_i = (+-1) q^{m_i}; returns a
    Laurent polynomial in y only.  Used to check the two parameterizations
    agree (signs included)."""
    r = M.rows
    out = LaurentPoly(s)
    for e, v in family.coeffs.items():
        ye, lame = e[:s], e[s:]
        coef = v
        for i in range(t):
            if lame[i]:
                sign = 1 if i < m else -1
                monoval = Fraction(1)
                for a in range(r):
                    monoval *= Fraction(q_values[a]) ** M.entries[a][i]
                coef *= (sign * monoval) ** lame[i]
        out = out + LaurentPoly.monomial(s, ye, coef)
    return out


def newton_polytope(B: IntegerMatrix) -> LatticePolytope:
    """Hull of the origin and the exponent columns."""
    pts = [tuple(0 for _ in range(B.rows))] + [B.col(i) for i in range(B.cols)]
    return LatticePolytope.from_points(pts)


@dataclass(frozen=True)
class WeightData:
    """Facet data of the Newton polytope turned into the weight function
    w(u) = min {l : u in l*Q}, with denominator e."""

    poly: LatticePolytope
    e: int

    @staticmethod
    def from_matrix(B: IntegerMatrix) -> "WeightData":
        poly = newton_polytope(B)
        dens = [f.offset for f in poly.facets if f.offset > 0]
        e = 1
        for d in dens:
            e = lcm(e, d)
        return WeightData(poly, e)

    def weight(self, u):
        """Weight as a Fraction, or None when u is outside the cone."""
        w = Fraction(0)
        for f in self.poly.facets:
            val = sum(a * b for a, b in zip(f.normal, u))
            if f.offset == 0:
                if val < 0:
                    return None
            else:
                need = Fraction(-val, f.offset)
                if need > w:
                    w = need
        return w


def _members_up_to(B: IntegerMatrix, wd: WeightData, bound: int, cone_index_sets):
    """Semigroup monomials of weight <= bound, as a sorted list.

    With subcone certificates the test is exact provided the subcones tile
    the cone (certified elsewhere by the W-set volume identity); without
    them the matrix must present the full lattice (complete-fan case) and
    we raise otherwise.
    """
    s = B.rows
    zero = tuple(0 for _ in range(s))
    region = LatticePolytope.from_points(
        dilate([zero] + [B.col(i) for i in range(B.cols)], bound)
    )
    pts = lattice_points(region)
    cols = [B.col(i) for i in range(B.cols)]
    if cone_index_sets:
        sets = [tuple(idx) for idx in cone_index_sets]

        def member(u):
            for idx in sets:
                coords = _solve_unimodular([cols[i] for i in idx], u)
                if coords is not None and all(c >= 0 for c in coords):
                    return True
            return False

    else:
        from tglab.intlinalg import smith_normal_form

        diag = smith_normal_form(B).diagonal
        if len(diag) < s or any(x != 1 for x in diag[:s]) or not _cone_is_everything(B):
            raise UnboundedSearch(
                "need subcone certificates or a lattice-spanning complete set of columns"
            )

        def member(u):
            return True

    out = []
    for p in pts:
        w = wd.weight(p)
        if w is None or w > bound:
            continue
        if member(p):
            out.append((w, p))
    return out


def _cone_is_everything(B: IntegerMatrix) -> bool:
    """True when the columns positively span the whole space."""
    from tglab.rationalcone import cone_hform

    h = cone_hform([B.col(i) for i in range(B.cols)], B.rows)
    return not h.equalities and not h.inequalities


def jacobian_quotient_dim(
    B: IntegerMatrix,
    lam,
    stabilization_window: int = 3,
    cutoff: int | None = None,
    cone_index_sets=(),
):
    """Dimension of C[NB] / (y_k df/dy_k) at the parameter lam.

    Degree slices of the weight filtration are swept until the dimension is
    constant across the window; raises StabilizationFailed (with the slice
    history attached) otherwise.
    """
    lam = [Fraction(x) for x in lam]
    if len(lam) != B.cols:
        raise ValueError("need one coefficient per column")
    if any(x == 0 for x in lam):
        raise ZeroCoefficient("parameter on the torus boundary")
    s, t = B.rows, B.cols
    wd = WeightData.from_matrix(B)
    if cutoff is None:
        diam = max(1, max(abs(x) for row in B.entries for x in row) if t else 1)
        cutoff = 4 * wd.e * diam
    # y_k df/dy_k = -sum_i b_{ki} lam_i y^{b_i}
    gens = []
    for k in range(s):
        g = {}
        for i in range(t):
            if B.entries[k][i]:
                col = B.col(i)
                g[col] = g.get(col, Fraction(0)) - B.entries[k][i] * lam[i]
        gens.append({e: c for e, c in g.items() if c})
    history = []
    members_all = _members_up_to(B, wd, cutoff, cone_index_sets)
    for bound in range(1, cutoff + 1):
        monos = [p for w, p in members_all if w <= bound]
        mono_index = {p: i for i, p in enumerate(monos)}
        multipliers = [p for w, p in members_all if w <= bound - 1]
        rows = []
        for u in multipliers:
            for g in gens:
                row = {}
                for e, c in g.items():
                    tgt = tuple(a + b for a, b in zip(u, e))
                    if tgt in mono_index:
                        row[mono_index[tgt]] = row.get(mono_index[tgt], Fraction(0)) + c
                if row:
                    rows.append(row)
        rank = _sparse_rank(rows)
        dim = len(monos) - rank
        history.append(dim)
        if len(history) >= stabilization_window and len(set(history[-stabilization_window:])) == 1:
            return {"dim": dim, "slices": history}
    raise StabilizationFailed(
        f"no stabilization within {cutoff} slices", partial=history
    )


def _sparse_rank(rows) -> int:
    """Exact rank of sparse rational rows (dict col -> coeff)."""
    pivots = {}
    rank = 0
    for row in rows:
        row = dict(row)
        while row:
            col = min(row)
            if col in pivots:
                f = row[col]
                prow = pivots[col]
                for c, v in prow.items():
                    row[c] = row.get(c, Fraction(0)) - f * v
                row = {c: v for c, v in row.items() if v}
            else:
                f = row[col]
                pivots[col] = {c: v / f for c, v in row.items()}
                rank += 1
                break
    return rank


def face_critical_system(B: IntegerMatrix, face_indices, lam):
    """Equations of the critical system of the face: the face part of f and
    its log derivatives.  Indices refer to the generator list (0, b_1..b_t)
    of the Newton polytope; index 0 is the origin."""
    s = B.rows
    lam = [Fraction(x) for x in lam]
    f = LaurentPoly(s)
    has_origin = False
    for idx in sorted(face_indices):
        if idx == 0:
            has_origin = True
            continue
        i = idx - 1
        f = f + LaurentPoly.monomial(s, B.col(i), lam[i])
    eqs = [f] + [f.log_derivative(k) for k in range(s)]
    return {"equations": eqs, "contains_origin": has_origin}


_GRID_CACHE: dict = {}


def _torus_grids(s, p):
    key = (s, p)
    if key not in _GRID_CACHE:
        units = np.arange(1, p, dtype=np.int64)
        _GRID_CACHE[key] = (units, np.meshgrid(*([units] * s), indexing="ij"))
    return _GRID_CACHE[key]


def _fp_witness(eqs, s, p):
    """First common zero of the equations on the F_p torus, or None."""
    units, grids = _torus_grids(s, p)
    ok = np.ones(grids[0].shape, dtype=bool)
    for poly in eqs:
        acc = np.zeros(grids[0].shape, dtype=np.int64)
        for e, c in poly.coeffs.items():
            den = c.denominator % p
            if den == 0:
                return None  # prime unusable for this parameter
            val = (c.numerator % p) * pow(den, -1, p) % p
            term = np.full(grids[0].shape, val, dtype=np.int64)
            for k in range(s):
                exp = e[k] % (p - 1)
                term = term * pow_mod_array(grids[k], exp, p) % p
            acc = (acc + term) % p
        ok &= acc == 0
        if not ok.any():
            return None
    idx = np.argwhere(ok)
    if idx.size == 0:
        return None
    first = idx[0]
    return tuple(int(units[i]) for i in first)


def pow_mod_array(base, exp, p):
    result = np.ones_like(base)
    b = base % p
    e = exp
    while e:
        if e & 1:
            result = result * b % p
        b = b * b % p
        e >>= 1
    return result


def classify_parameter(
    B: IntegerMatrix,
    lam,
    primes=(101, 103),
    stabilization_window: int = 3,
    cutoff: int | None = None,
    cone_index_sets=(),
):
    """good / non_tame_suspected / bad_suspected with the evidence recorded.

    good means the Jacobian quotient dimension equals the normalized volume
    and no proper face avoiding the origin has a torus witness over the
    test primes.  The face search is a sound-but-incomplete heuristic.
    """
    from tglab.polytopes import faces, normalized_volume

    lam = [Fraction(x) for x in lam]
    if any(x == 0 for x in lam):
        raise ZeroCoefficient("parameter on the torus boundary")
    s = B.rows
    poly = newton_polytope(B)
    vol = normalized_volume(poly.points)
    evidence = {"volume": vol}
    witness_info = None
    tame_witness = None
    for face in faces(poly):
        if face.supporting is None:
            continue  # the whole polytope
        sys = face_critical_system(B, sorted(face.indices), lam)
        if sys["contains_origin"]:
            eqs = sys["equations"][1:]  # lambda_0 absorbs the fiber equation
        else:
            eqs = sys["equations"]
        if all(e.is_zero() for e in eqs):
            continue
        # A single-monomial equation with a nonzero coefficient has no torus
        # zero over any field, so the face can be skipped exactly.
        if any(len(e.coeffs) == 1 for e in eqs if not e.is_zero()):
            continue
        for p in primes:
            wit = _fp_witness(eqs, s, p)
            if wit is not None:
                if not sys["contains_origin"]:
                    witness_info = {"face": sorted(face.indices), "prime": p, "point": wit}
                else:
                    tame_witness = {"face": sorted(face.indices), "prime": p, "point": wit}
                break
        if witness_info:
            break
    if witness_info:
        evidence["bad_face_witness"] = witness_info
        return {"verdict": "bad_suspected", "evidence": evidence}
    jac = jacobian_quotient_dim(
        B,
        lam,
        stabilization_window=stabilization_window,
        cutoff=cutoff,
        cone_index_sets=cone_index_sets,
    )
    evidence["jacobian_dim"] = jac["dim"]
    if jac["dim"] != vol:
        evidence["dimension_mismatch"] = True
        return {"verdict": "non_tame_suspected", "evidence": evidence}
    if tame_witness:
        evidence["tame_face_witness"] = tame_witness
    return {"verdict": "good", "evidence": evidence}
