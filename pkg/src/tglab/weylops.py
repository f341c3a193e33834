"""Normal-ordered operator algebra in lambda, d/dlambda, z and z^2 d/dz.

A term is coeff * z^a * lambda^alpha * T^e * partial^beta where T denotes
z^2 d/dz, kept as a primitive generator.  Terms are stored normal-ordered
(all lambda and z powers left of T and the partials), and the commutation
rules are

    partial_i lambda_i = lambda_i partial_i + 1
    T z^a = z^a T + a z^{a+1}

with everything else commuting.  Negative lambda powers are only allowed
for variables whose ``laurent`` flag is set; negative z powers are always
allowed (the hat-side modules are localized along z = 0).

The second half of the file builds the operator families: plain and
homogenized box/Euler generators, their hat (z-twisted) forms, the
lambda-scaled star and tilde boxes, the quantum-D-module generators in the
Kaehler-moduli coordinates, the duality morphisms, the torus coordinate
change, and a bounded left-ideal membership search.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from tglab.errors import (
    DimensionMismatch,
    NotEliminable,
    NotLogExpressible,
    NotSameImage,
)
from tglab.intlinalg import IntegerMatrix


@dataclass(frozen=True)
class OpContext:
    """Variable layout of an operator: count, invertibility, display names."""

    nvars: int
    laurent: tuple
    names: tuple

    @staticmethod
    def make(nvars, laurent=False, names=None, prefix="l"):
        if isinstance(laurent, bool):
            laurent = tuple(laurent for _ in range(nvars))
        else:
            laurent = tuple(bool(x) for x in laurent)
        if names is None:
            names = tuple(f"{prefix}{i+1}" for i in range(nvars))
        return OpContext(nvars, laurent, tuple(names))


class WeylOp:
    """A normal-ordered operator; immutable in spirit, hashable by terms."""

    __slots__ = ("ctx", "terms")

    def __init__(self, ctx: OpContext, terms=None):
        self.ctx = ctx
        self.terms = {}
        if terms:
            for key, coeff in terms.items():
                c = Fraction(coeff)
                if c != 0:
                    self.terms[key] = self.terms.get(key, Fraction(0)) + c
            self.terms = {k: v for k, v in self.terms.items() if v != 0}

    # -- construction -----------------------------------------------------

    @staticmethod
    def zero(ctx):
        return WeylOp(ctx)

    @staticmethod
    def scalar(ctx, value):
        n = ctx.nvars
        key = (0, (0,) * n, 0, (0,) * n)
        return WeylOp(ctx, {key: Fraction(value)})

    @staticmethod
    def one(ctx):
        return WeylOp.scalar(ctx, 1)

    @staticmethod
    def monomial(ctx, coeff=1, z=0, lam=None, theta=0, pa=None):
        n = ctx.nvars
        lam = tuple(lam) if lam is not None else (0,) * n
        pa = tuple(pa) if pa is not None else (0,) * n
        if len(lam) != n or len(pa) != n:
            raise DimensionMismatch("exponent vector length mismatch")
        for i, e in enumerate(lam):
            if e < 0 and not ctx.laurent[i]:
                raise NotLogExpressible(
                    f"negative power of non-invertible variable {ctx.names[i]}"
                )
        if any(x < 0 for x in pa) or theta < 0:
            raise ValueError("derivative exponents must be nonnegative")
        return WeylOp(ctx, {(z, lam, theta, pa): Fraction(coeff)})

    @staticmethod
    def var(ctx, i, power=1):
        lam = [0] * ctx.nvars
        lam[i] = power
        return WeylOp.monomial(ctx, lam=lam)

    @staticmethod
    def partial(ctx, i, power=1):
        pa = [0] * ctx.nvars
        pa[i] = power
        return WeylOp.monomial(ctx, pa=pa)

    @staticmethod
    def zpow(ctx, power):
        return WeylOp.monomial(ctx, z=power)

    @staticmethod
    def theta_z(ctx):
        return WeylOp.monomial(ctx, theta=1)

    # -- ring structure ----------------------------------------------------

    def _check(self, other):
        if self.ctx != other.ctx:
            raise DimensionMismatch("operator contexts differ")

    def __add__(self, other):
        self._check(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, Fraction(0)) + v
        return WeylOp(self.ctx, out)

    def __sub__(self, other):
        self._check(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, Fraction(0)) - v
        return WeylOp(self.ctx, out)

    def __neg__(self):
        return WeylOp(self.ctx, {k: -v for k, v in self.terms.items()})

    def scale(self, c):
        return WeylOp(self.ctx, {k: v * Fraction(c) for k, v in self.terms.items()})

    def __mul__(self, other):
        self._check(other)
        acc = {}
        for rkey, rc in other.terms.items():
            rz, rlam, rth, rpa = rkey
            for lkey, lc in self.terms.items():
                piece = _term_times_generators(self.ctx, lkey, rz, rlam, rth, rpa)
                f = lc * rc
                for k, v in piece.items():
                    acc[k] = acc.get(k, Fraction(0)) + f * v
        return WeylOp(self.ctx, acc)

    def __eq__(self, other):
        return isinstance(other, WeylOp) and self.ctx == other.ctx and self.terms == other.terms

    def __hash__(self):
        return hash((self.ctx, tuple(sorted(self.terms.items()))))

    def is_zero(self) -> bool:
        return not self.terms

    # -- presentation -------------------------------------------------------

    def sorted_terms(self):
        """Terms in the canonical order: derivative block (partials plus T)
        by descending total degree with reversed-exponent tie break, then
        the lambda block and the z power lexicographically."""

        def key(item):
            z, lam, th, pa = item[0]
            dblock = pa + (th,)
            return (
                -(sum(pa) + th),
                tuple(-x for x in reversed(dblock)),
                lam,
                z,
            )

        return sorted(self.terms.items(), key=key)

    def to_records(self):
        """Byte-stable export: list of term records in canonical order."""
        out = []
        for (z, lam, th, pa), coeff in self.sorted_terms():
            out.append(
                {
                    "coeff": f"{coeff.numerator}/{coeff.denominator}",
                    "z": z,
                    "thetaz": th,
                    "lambda": list(lam),
                    "partial": list(pa),
                }
            )
        return out

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for (z, lam, th, pa), coeff in self.sorted_terms():
            bits = []
            if coeff != 1 or (z == 0 and th == 0 and not any(lam) and not any(pa)):
                bits.append(str(coeff))
            if z:
                bits.append(f"z^{z}" if z != 1 else "z")
            for i, e in enumerate(lam):
                if e:
                    nm = self.ctx.names[i]
                    bits.append(f"{nm}^{e}" if e != 1 else nm)
            if th:
                bits.append(f"T^{th}" if th != 1 else "T")
            for i, e in enumerate(pa):
                if e:
                    nm = self.ctx.names[i]
                    bits.append(f"D{nm}^{e}" if e != 1 else f"D{nm}")
            parts.append("*".join(bits))
        return " + ".join(parts)


def _term_times_generators(ctx, lkey, rz, rlam, rth, rpa):
    """left term * (z^rz * lambda^rlam * T^rth * partial^rpa), normal ordered.

    The right factor is consumed generator by generator in its own written
    order, so the product of two normal-ordered terms is exact."""
    acc = {lkey: Fraction(1)}
    step = abs(rz)
    sign = 1 if rz >= 0 else -1
    for _ in range(step):
        acc = _mul_z(ctx, acc, sign)
    for i, e in enumerate(rlam):
        s = 1 if e >= 0 else -1
        for _ in range(abs(e)):
            acc = _mul_lambda(ctx, acc, i, s)
    if rth:
        acc = {(z, lam, th + rth, pa): c for (z, lam, th, pa), c in acc.items()}
    if any(rpa):
        out = {}
        for (z, lam, th, pa), c in acc.items():
            npa = tuple(a + b for a, b in zip(pa, rpa))
            out[(z, lam, th, npa)] = out.get((z, lam, th, npa), Fraction(0)) + c
        acc = out
    return acc


def _mul_z(ctx, terms, sign):
    out = {}

    def emit(key, c):
        out[key] = out.get(key, Fraction(0)) + c

    for key, c in terms.items():
        for k2, c2 in _term_mul_z(key, sign).items():
            emit(k2, c * c2)
    return out


def _term_mul_z(key, sign):
    z, lam, th, pa = key
    if th == 0:
        return {(z + sign, lam, 0, pa): Fraction(1)}
    # T^e z = (T^{e-1} z) T + (T^{e-1} z) z  and  T^e z^-1 = (T^{e-1} z^-1) T - T^{e-1}
    base = _term_mul_z((z, lam, th - 1, pa), sign)
    out = {}
    for (bz, blam, bth, bpa), c in base.items():
        k_theta = (bz, blam, bth + 1, bpa)
        out[k_theta] = out.get(k_theta, Fraction(0)) + c
    if sign > 0:
        for bkey, c in base.items():
            for k2, c2 in _term_mul_z(bkey, 1).items():
                out[k2] = out.get(k2, Fraction(0)) + c * c2
    else:
        k_drop = (z, lam, th - 1, pa)
        out[k_drop] = out.get(k_drop, Fraction(0)) - 1
    return out


def _mul_lambda(ctx, terms, i, sign):
    out = {}
    for key, c in terms.items():
        for k2, c2 in _term_mul_lambda(ctx, key, i, sign).items():
            out[k2] = out.get(k2, Fraction(0)) + c * c2
    return out


def _term_mul_lambda(ctx, key, i, sign):
    z, lam, th, pa = key
    b = pa[i]
    if sign > 0:
        # partial_i^b lambda_i = lambda_i partial_i^b + b partial_i^{b-1}
        out = {}
        lam_up = lam[:i] + (lam[i] + 1,) + lam[i + 1 :]
        out[(z, lam_up, th, pa)] = Fraction(1)
        if b:
            pa_dn = pa[:i] + (b - 1,) + pa[i + 1 :]
            out[(z, lam, th, pa_dn)] = Fraction(b)
        return out
    if not ctx.laurent[i]:
        raise NotLogExpressible(
            f"negative power of non-invertible variable {ctx.names[i]}"
        )
    if b == 0:
        lam_dn = lam[:i] + (lam[i] - 1,) + lam[i + 1 :]
        return {(z, lam_dn, th, pa): Fraction(1)}
    # partial_i^b lambda_i^-1 = partial_i^{b-1} (lambda_i^-1 partial_i - lambda_i^-2)
    base_key = (z, lam, th, pa[:i] + (b - 1,) + pa[i + 1 :])
    base = _term_mul_lambda(ctx, base_key, i, -1)
    out = {}
    for (bz, blam, bth, bpa), c in base.items():
        up = bpa[:i] + (bpa[i] + 1,) + bpa[i + 1 :]
        out[(bz, blam, bth, up)] = out.get((bz, blam, bth, up), Fraction(0)) + c
        for k2, c2 in _term_mul_lambda(ctx, (bz, blam, bth, bpa), i, -1).items():
            out[k2] = out.get(k2, Fraction(0)) - c * c2
    return out


def normal_order(op: WeylOp) -> WeylOp:
    """Operators are kept normal-ordered; this just prunes zero terms."""
    return WeylOp(op.ctx, dict(op.terms))


# ---------------------------------------------------------------------------
# operator family builders
# ---------------------------------------------------------------------------


def _beta_list(beta, length):
    beta = [Fraction(b) for b in beta]
    if len(beta) != length:
        raise DimensionMismatch("parameter vector has the wrong length")
    return beta


def beta_outside_verified_regime(beta) -> bool:
    """True when some entry is non-integral; builders accept these but the
    duality statements are only verified at integer parameters."""
    return any(Fraction(b).denominator != 1 for b in beta)


def gkz_generators(B: IntegerMatrix, beta, kernel_basis=None):
    """Plain box operators for a kernel basis plus Euler operators E_k - beta_k."""
    from tglab.intlinalg import kernel_lattice

    t = B.cols
    ctx = OpContext.make(t, laurent=False, prefix="l")
    if kernel_basis is None:
        kernel_basis = kernel_lattice(B).basis
    boxes = [box_operator(ctx, kernel_basis.col(a)) for a in range(kernel_basis.cols)]
    beta = _beta_list(beta, B.rows)
    eulers = []
    for k in range(B.rows):
        op = WeylOp.zero(ctx)
        for i in range(t):
            if B.entries[k][i]:
                op = op + (WeylOp.var(ctx, i) * WeylOp.partial(ctx, i)).scale(B.entries[k][i])
        eulers.append(op - WeylOp.scalar(ctx, beta[k]))
    return {"ctx": ctx, "boxes": boxes, "eulers": eulers}


def box_operator(ctx, l) -> WeylOp:
    """prod_{l_i<0} partial_i^{-l_i} - prod_{l_i>0} partial_i^{l_i}."""
    neg = WeylOp.one(ctx)
    pos = WeylOp.one(ctx)
    for i, li in enumerate(l):
        if li < 0:
            neg = neg * WeylOp.partial(ctx, i, -li)
        elif li > 0:
            pos = pos * WeylOp.partial(ctx, i, li)
    return neg - pos


def homogenized_generators(Btilde: IntegerMatrix, beta_tilde, kernel_basis=None):
    """Generators of the homogenized system on t+1 variables.

    Box operators follow the convention fixed by the worked examples: for
    lbar = -sum(l) < 0 the operator is prod_{l>0} partial^l -
    partial_0^{-lbar} prod_{l<0} partial^{-l}; for lbar >= 0 the partial_0
    power sits on the positive side.
    """
    from tglab.intlinalg import kernel_lattice

    t1 = Btilde.cols
    ctx = OpContext.make(t1, laurent=False, names=tuple(f"l{i}" for i in range(t1)))
    if kernel_basis is None:
        kernel_basis = kernel_lattice(
            Btilde.submatrix(range(1, Btilde.rows), range(1, t1))
        ).basis
    boxes = [
        homogenized_box(ctx, kernel_basis.col(a)) for a in range(kernel_basis.cols)
    ]
    beta = _beta_list(beta_tilde, Btilde.rows)
    eulers = []
    for k in range(Btilde.rows):
        op = WeylOp.zero(ctx)
        for i in range(t1):
            if Btilde.entries[k][i]:
                op = op + (WeylOp.var(ctx, i) * WeylOp.partial(ctx, i)).scale(
                    Btilde.entries[k][i]
                )
        eulers.append(op - WeylOp.scalar(ctx, beta[k]))
    return {"ctx": ctx, "boxes": boxes, "eulers": eulers}


def homogenized_box(ctx, l) -> WeylOp:
    """Box operator of the homogenized system for a base relation l.

    Variable 0 is the homogenizing one; l refers to variables 1..t."""
    lbar = -sum(l)
    pos = WeylOp.one(ctx)
    neg = WeylOp.one(ctx)
    for i, li in enumerate(l):
        if li > 0:
            pos = pos * WeylOp.partial(ctx, i + 1, li)
        elif li < 0:
            neg = neg * WeylOp.partial(ctx, i + 1, -li)
    if lbar >= 0:
        pos = WeylOp.partial(ctx, 0, lbar) * pos if lbar else pos
    else:
        neg = WeylOp.partial(ctx, 0, -lbar) * neg
    return pos - neg


def fl_hat_generators(B: IntegerMatrix, beta0_beta, kernel_basis=None):
    """Hat-form generators: boxes in (z partial), Euler fields with z-weights."""
    from tglab.intlinalg import kernel_lattice

    t = B.cols
    ctx = OpContext.make(t, laurent=False, prefix="l")
    if kernel_basis is None:
        kernel_basis = kernel_lattice(B).basis
    boxes = [hat_box(ctx, kernel_basis.col(a)) for a in range(kernel_basis.cols)]
    beta0 = Fraction(beta0_beta[0])
    beta = _beta_list(beta0_beta[1:], B.rows)
    z = WeylOp.zpow(ctx, 1)
    ehat = WeylOp.theta_z(ctx)
    for i in range(t):
        ehat = ehat + z * WeylOp.var(ctx, i) * WeylOp.partial(ctx, i)
    ehat = ehat - z.scale(beta0)
    eulers = []
    for k in range(B.rows):
        op = WeylOp.zero(ctx)
        for i in range(t):
            if B.entries[k][i]:
                op = op + (z * WeylOp.var(ctx, i) * WeylOp.partial(ctx, i)).scale(
                    B.entries[k][i]
                )
        eulers.append(op - z.scale(beta[k]))
    return {"ctx": ctx, "boxes": boxes, "eulers": eulers, "ehat": ehat}


def hat_box(ctx, l) -> WeylOp:
    neg = WeylOp.one(ctx)
    pos = WeylOp.one(ctx)
    for i, li in enumerate(l):
        zd = WeylOp.zpow(ctx, 1) * WeylOp.partial(ctx, i)
        if li < 0:
            for _ in range(-li):
                neg = neg * zd
        elif li > 0:
            for _ in range(li):
                pos = pos * zd
    return neg - pos


def fl_substitution(op: WeylOp):
    """Image of an operator on the homogenized space under lambda_0 -> T,
    partial_0 -> 1/z, dropping variable 0.

    Returns (image, clearing_power) where clearing_power is the smallest
    k >= 0 such that z^k times the image has no negative z powers.
    """
    ctx = op.ctx
    t = ctx.nvars - 1
    new_ctx = OpContext.make(t, laurent=ctx.laurent[1:], names=ctx.names[1:])
    image = WeylOp.zero(new_ctx)
    for (z, lam, th, pa), coeff in op.terms.items():
        if z != 0 or th != 0:
            raise NotEliminable("operator already lives on the hat side")
        if lam[0] < 0:
            raise NotEliminable("negative power of the homogenizing variable")
        a0, b0 = lam[0], pa[0]
        piece = WeylOp.monomial(
            new_ctx, coeff=coeff, z=0, lam=lam[1:], theta=a0, pa=pa[1:]
        )
        if b0:
            piece = piece * WeylOp.zpow(new_ctx, -b0)
        image = image + piece
    clearing = 0
    for (z, lam, th, pa) in image.terms:
        clearing = max(clearing, -z)
    return image, clearing


def fl_match_homogenized(B: IntegerMatrix, relation):
    """Compare the substituted homogenized box with the hat box.

    Returns a record with the explicit z power and sign making
    z^k * image == sign * hat_box."""
    from tglab.intlinalg import kernel_lattice

    t = B.cols
    hctx = OpContext.make(t + 1, laurent=False, names=tuple(f"l{i}" for i in range(t + 1)))
    hbox = homogenized_box(hctx, relation)
    image, _ = fl_substitution(hbox)
    lbar = -sum(relation)
    zk = max(lbar, 0) + sum(x for x in relation if x > 0)
    shifted = WeylOp.zpow(image.ctx, zk) * image
    target = hat_box(image.ctx, relation)
    if shifted == target.scale(-1):
        sign = -1
    elif shifted == target:
        sign = 1
    else:
        sign = 0
    return {"relation": tuple(relation), "z_power": zk, "sign": sign, "matches": sign != 0}


def star_n_generators(Aprime: IntegerMatrix, beta0_beta, m: int, kernel_basis=None):
    """Tilde boxes with the nu-shifted bundle factors, plus hat Euler fields,
    over the torus (all variables invertible)."""
    from tglab.intlinalg import kernel_lattice

    t = Aprime.cols
    c = t - m
    ctx = OpContext.make(t, laurent=True, prefix="l")
    if kernel_basis is None:
        kernel_basis = kernel_lattice(Aprime).basis
    boxes = [
        tilde_box(ctx, kernel_basis.col(a), m) for a in range(kernel_basis.cols)
    ]
    star_boxes = [
        star_box(ctx, kernel_basis.col(a)) for a in range(kernel_basis.cols)
    ]
    beta0 = Fraction(beta0_beta[0])
    beta = _beta_list(beta0_beta[1:], Aprime.rows)
    z = WeylOp.zpow(ctx, 1)
    ehat0 = WeylOp.theta_z(ctx)
    for i in range(t):
        ehat0 = ehat0 + z * WeylOp.var(ctx, i) * WeylOp.partial(ctx, i)
    ehat0 = ehat0 - z.scale(beta0)
    eulers = [ehat0]
    for k in range(Aprime.rows):
        op = WeylOp.zero(ctx)
        for i in range(t):
            if Aprime.entries[k][i]:
                op = op + (z * WeylOp.var(ctx, i) * WeylOp.partial(ctx, i)).scale(
                    Aprime.entries[k][i]
                )
        eulers.append(op - z.scale(beta[k]))
    return {
        "ctx": ctx,
        "boxes": boxes,
        "star_boxes": star_boxes,
        "eulers": eulers,
    }


def _loglam(ctx, i):
    """z * lambda_i * partial_i."""
    return WeylOp.zpow(ctx, 1) * WeylOp.var(ctx, i) * WeylOp.partial(ctx, i)


def star_box(ctx, l) -> WeylOp:
    """lambda-scaled hat box: all variables carry lambda^l (z partial) powers."""
    t = ctx.nvars
    pos = WeylOp.one(ctx)
    for i, li in enumerate(l):
        if li > 0:
            for _ in range(li):
                pos = pos * _loglam(ctx, i)
    lam_l = WeylOp.monomial(ctx, lam=tuple(l))
    neg = lam_l
    for i, li in enumerate(l):
        if li < 0:
            for _ in range(-li):
                neg = neg * _loglam(ctx, i)
    return pos - neg


def tilde_box(ctx, l, m: int) -> WeylOp:
    """Star box with the bundle variables (index >= m) carrying the shifted
    factors prod_nu (lambda (z partial) - nu z)."""
    pos = WeylOp.one(ctx)
    for i, li in enumerate(l):
        if li <= 0:
            continue
        if i < m:
            for _ in range(li):
                pos = pos * _loglam(ctx, i)
        else:
            for nu in range(1, li + 1):
                pos = pos * (_loglam(ctx, i) - WeylOp.zpow(ctx, 1).scale(nu))
    neg = WeylOp.monomial(ctx, lam=tuple(l))
    for i, li in enumerate(l):
        if li >= 0:
            continue
        if i < m:
            for _ in range(-li):
                neg = neg * _loglam(ctx, i)
        else:
            for nu in range(1, -li + 1):
                neg = neg * (_loglam(ctx, i) - WeylOp.zpow(ctx, 1).scale(nu))
    return pos - neg


def duality_morphism(kind: str, m: int, c: int) -> WeylOp:
    """Right-multiplication operator of the duality morphism.

    plain: partial_0 * partial_{m+1} ... partial_{m+c} on the homogenized
    space; hat: partial_{m+1} ... partial_{m+c}; tilde: the product of the
    z lambda partial factors over the bundle variables (identity for c=0).
    """
    if kind == "plain":
        ctx = OpContext.make(m + c + 1, laurent=False, names=tuple(f"l{i}" for i in range(m + c + 1)))
        op = WeylOp.partial(ctx, 0)
        for j in range(c):
            op = op * WeylOp.partial(ctx, m + 1 + j)
        return op
    if kind == "hat":
        ctx = OpContext.make(m + c, laurent=False, prefix="l")
        op = WeylOp.one(ctx)
        for j in range(c):
            op = op * WeylOp.partial(ctx, m + j)
        return op
    if kind == "tilde":
        ctx = OpContext.make(m + c, laurent=True, prefix="l")
        op = WeylOp.one(ctx)
        for j in range(c):
            op = op * _loglam(ctx, m + j)
        return op
    raise ValueError(f"unknown duality morphism kind {kind!r}")


def psi_twist(m: int, c: int) -> WeylOp:
    """Right multiplication by z^c lambda_{m+1} ... lambda_{m+c}."""
    ctx = OpContext.make(m + c, laurent=True, prefix="l")
    lam = [0] * (m + c)
    for j in range(c):
        lam[m + j] = 1
    return WeylOp.monomial(ctx, z=c, lam=tuple(lam))


def shift_morphism_factorization(Btilde: IntegerMatrix, c1, c2):
    """Certificate that partial^c1 - partial^c2 factors through a box.

    Requires equal semigroup images; returns the relation l = c1 - c2, the
    common factor min(c1, c2) and the verified identity
    partial^c1 - partial^c2 = partial^min * box(-l)."""
    c1 = tuple(int(x) for x in c1)
    c2 = tuple(int(x) for x in c2)
    if len(c1) != Btilde.cols or len(c2) != Btilde.cols:
        raise DimensionMismatch("exponent length mismatch")
    if any(x < 0 for x in c1 + c2):
        raise ValueError("exponents must be nonnegative")
    if Btilde.mul_vec(c1) != Btilde.mul_vec(c2):
        raise NotSameImage("exponents map to different semigroup elements")
    l = tuple(a - b for a, b in zip(c1, c2))
    mn = tuple(min(a, b) for a, b in zip(c1, c2))
    ctx = OpContext.make(Btilde.cols, laurent=False, names=tuple(f"l{i}" for i in range(Btilde.cols)))
    lhs = WeylOp.monomial(ctx, pa=c1) - WeylOp.monomial(ctx, pa=c2)
    rhs = WeylOp.monomial(ctx, pa=mn) * box_operator(ctx, tuple(-x for x in l))
    return {
        "relation": l,
        "common": mn,
        "identity_holds": lhs == rhs,
        "lhs": lhs,
        "rhs": rhs,
    }


# ---------------------------------------------------------------------------
# quantum-D-module generators and the torus coordinate change
# ---------------------------------------------------------------------------


def qdm_context(r: int) -> OpContext:
    return OpContext.make(r, laurent=True, names=tuple(f"q{a+1}" for a in range(r)))


def _hat_class(ctx, coords):
    """sum_a z * coords_a * q_a partial_a for a class written in the basis."""
    op = WeylOp.zero(ctx)
    for a, coef in enumerate(coords):
        if coef:
            op = op + _loglam(ctx, a).scale(coef)
    return op


def qdm_box(ctx, kernel_matrix: IntegerMatrix, m: int, l_coords, l_vector) -> WeylOp:
    """Q_l from the displayed product formula.

    kernel_matrix rows give the basis coordinates of the ray classes (rows
    0..m-1) and of minus the bundle classes (rows m..); l_coords are the
    basis coordinates of the relation and l_vector its entries."""
    t = kernel_matrix.rows
    c = t - m
    pos = WeylOp.one(ctx)
    neg = WeylOp.one(ctx)
    z = WeylOp.zpow(ctx, 1)
    for i in range(m):
        li = l_vector[i]
        dhat = _hat_class(ctx, kernel_matrix.row(i))
        if li > 0:
            for nu in range(li):
                pos = pos * (dhat - z.scale(nu))
        elif li < 0:
            for nu in range(-li):
                neg = neg * (dhat - z.scale(nu))
    for j in range(c):
        lmj = l_vector[m + j]
        lhat = _hat_class(ctx, tuple(-x for x in kernel_matrix.row(m + j)))
        if lmj > 0:
            for nu in range(1, lmj + 1):
                pos = pos * (lhat + z.scale(nu))
        elif lmj < 0:
            for nu in range(1, -lmj + 1):
                neg = neg * (lhat + z.scale(nu))
    qmon = WeylOp.monomial(ctx, lam=tuple(l_coords))
    return pos - qmon * neg


def qdm_euler(ctx, kernel_matrix: IntegerMatrix) -> WeylOp:
    """E = T - K_hat = T + sum_i (row sums) z q d/dq."""
    r = kernel_matrix.cols
    coords = [sum(kernel_matrix.entries[i][a] for i in range(kernel_matrix.rows)) for a in range(r)]
    return WeylOp.theta_z(ctx) + _hat_class(ctx, coords)


@dataclass(frozen=True)
class TorusChange:
    """Data of the coordinate change lambda -> (f, q): the section matrices
    and the bundle range, with sign twist on the bundle variables."""

    C: IntegerMatrix       # (m+c) x (n+c)
    L: IntegerMatrix       # (m+c) x r
    M: IntegerMatrix       # r x (m+c)
    Aprime: IntegerMatrix  # (n+c) x (m+c)
    m: int

    @property
    def n_f(self) -> int:
        return self.C.cols

    @property
    def n_q(self) -> int:
        return self.L.cols

    def target_context(self) -> OpContext:
        names = tuple(f"f{j+1}" for j in range(self.n_f)) + tuple(
            f"q{a+1}" for a in range(self.n_q)
        )
        return OpContext.make(self.n_f + self.n_q, laurent=True, names=names)


def theta_coordinate_change(op: WeylOp, change: TorusChange) -> WeylOp:
    """Rewrite an operator over the lambda torus in the (f, q) coordinates.

    Each term is split as lambda^delta times a product of factors
    (lambda_i partial_i - nu); the monomial maps to
    (-1)^(bundle part) f^(A' delta) q^(M delta) and the log fields map to
    sum_j C_ij f_j d/df_j + sum_a L_ia q_a d/dq_a.  z and T pass through.
    """
    src = op.ctx
    t = src.nvars
    tgt = change.target_context()
    nf, nq = change.n_f, change.n_q
    logfields = []
    for i in range(t):
        fld = WeylOp.zero(tgt)
        for j in range(nf):
            if change.C.entries[i][j]:
                fld = fld + (WeylOp.var(tgt, j) * WeylOp.partial(tgt, j)).scale(
                    change.C.entries[i][j]
                )
        for a in range(nq):
            if change.L.entries[i][a]:
                fld = fld + (
                    WeylOp.var(tgt, nf + a) * WeylOp.partial(tgt, nf + a)
                ).scale(change.L.entries[i][a])
        logfields.append(fld)
    out = WeylOp.zero(tgt)
    for (z, lam, th, pa), coeff in op.terms.items():
        delta = tuple(a - b for a, b in zip(lam, pa))
        sign = 1
        for i in range(change.m, t):
            if delta[i] % 2:
                sign = -sign
        f_exp = change.Aprime.mul_vec(delta)
        q_exp = change.M.mul_vec(delta)
        piece = WeylOp.monomial(
            tgt,
            coeff=coeff * sign,
            z=z,
            lam=tuple(f_exp) + tuple(q_exp),
            theta=th,
        )
        for i in range(t):
            for nu in range(pa[i]):
                piece = piece * (logfields[i] - WeylOp.scalar(tgt, nu))
        out = out + piece
    return out


def i_theta_restrict(op: WeylOp, change: TorusChange) -> WeylOp:
    """Restrict an (f, q)-operator to q only: drop every term with an
    f-derivative, then set the f variables to one."""
    nf, nq = change.n_f, change.n_q
    qctx = OpContext.make(nq, laurent=True, names=op.ctx.names[nf:])
    out = {}
    for (z, lam, th, pa), coeff in op.terms.items():
        if any(pa[:nf]):
            continue
        key = (z, lam[nf:], th, pa[nf:])
        out[key] = out.get(key, Fraction(0)) + coeff
    return WeylOp(qctx, out)


# ---------------------------------------------------------------------------
# bounded left-ideal membership
# ---------------------------------------------------------------------------


def bounded_ideal_membership(P: WeylOp, generators, total_degree_bound: int,
                             z_range=(-2, 3), lam_range=None, theta_bound=None):
    """Search for P = sum h_j g_j with the h_j supported on a bounded
    monomial set; a certificate is sound, failure is only 'inconclusive'.

    The h_j range over monomials z^a lambda^alpha T^e partial^beta with
    sum |alpha| + e + sum beta <= total_degree_bound, z power within
    z_range and lambda powers within lam_range (defaulting to
    [0, bound], or [-bound, bound] for invertible variables).
    """
    ctx = P.ctx
    n = ctx.nvars
    if theta_bound is None:
        theta_bound = total_degree_bound
    if lam_range is None:
        lam_range = [
            (-total_degree_bound, total_degree_bound) if ctx.laurent[i] else (0, total_degree_bound)
            for i in range(n)
        ]
    monos = []
    lam_axes = [range(lo, hi + 1) for lo, hi in lam_range]
    pa_axes = [range(0, total_degree_bound + 1)] * n
    for zp in range(z_range[0], z_range[1] + 1):
        for lam in product(*lam_axes):
            if sum(abs(x) for x in lam) > total_degree_bound:
                continue
            for th in range(theta_bound + 1):
                for pa in product(*pa_axes):
                    if sum(abs(x) for x in lam) + th + sum(pa) > total_degree_bound:
                        continue
                    monos.append((zp, lam, th, pa))
    columns = []
    col_meta = []
    for j, g in enumerate(generators):
        for key in monos:
            h = WeylOp(ctx, {key: Fraction(1)})
            prod_op = h * g
            if prod_op.is_zero():
                continue
            columns.append(prod_op.terms)
            col_meta.append((j, key))
    target = P.terms
    row_keys = set(target)
    for col in columns:
        row_keys.update(col)
    row_index = {k: i for i, k in enumerate(sorted(row_keys))}
    nrows, ncols = len(row_index), len(columns)
    mat = [[Fraction(0)] * (ncols + 1) for _ in range(nrows)]
    for cidx, col in enumerate(columns):
        for key, val in col.items():
            mat[row_index[key]][cidx] = val
    for key, val in target.items():
        mat[row_index[key]][ncols] = val
    sol = _solve_linear(mat, ncols)
    if sol is None:
        return {"status": "inconclusive"}
    coeffs = {}
    for cidx, val in enumerate(sol):
        if val:
            j, key = col_meta[cidx]
            coeffs.setdefault(j, {})[key] = val
    combo = WeylOp.zero(ctx)
    for j, terms in coeffs.items():
        combo = combo + WeylOp(ctx, terms) * generators[j]
    if combo != P:
        return {"status": "inconclusive"}
    certificate = {j: WeylOp(ctx, terms) for j, terms in coeffs.items()}
    return {"status": "certificate", "coefficients": certificate}


def _solve_linear(aug, ncols):
    """One solution of the augmented system, or None."""
    nrows = len(aug)
    pivots = []
    pr = 0
    for col in range(ncols):
        piv = next((i for i in range(pr, nrows) if aug[i][col] != 0), None)
        if piv is None:
            continue
        aug[pr], aug[piv] = aug[piv], aug[pr]
        pv = aug[pr][col]
        aug[pr] = [x / pv for x in aug[pr]]
        for i in range(nrows):
            if i != pr and aug[i][col] != 0:
                f = aug[i][col]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[pr])]
        pivots.append(col)
        pr += 1
    for i in range(pr, nrows):
        if aug[i][ncols] != 0:
            return None
    sol = [Fraction(0)] * ncols
    for i, col in enumerate(pivots):
        sol[col] = aug[i][ncols]
    return sol
