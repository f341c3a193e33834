"""Exact integer linear algebra.

Smith normal form with unimodular transforms, saturated kernel lattices,
and the section-matrix systems (C, L, M, D) attached to a surjective
integer matrix.  All arithmetic uses Python integers, so nothing here can
overflow or round.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from tglab.errors import DimensionMismatch, NotARelation, NotSurjective


@dataclass(frozen=True)
class IntegerMatrix:
    """Immutable dense integer matrix, row-major."""

    rows: int
    cols: int
    entries: tuple  # tuple of row tuples

    def __post_init__(self):
        if len(self.entries) != self.rows:
            raise DimensionMismatch("row count does not match entries")
        for row in self.entries:
            if len(row) != self.cols:
                raise DimensionMismatch("column count does not match entries")

    @staticmethod
    def from_rows(rows) -> "IntegerMatrix":
        entries = tuple(tuple(int(x) for x in row) for row in rows)
        nrows = len(entries)
        ncols = len(entries[0]) if entries else 0
        return IntegerMatrix(nrows, ncols, entries)

    @staticmethod
    def identity(n: int) -> "IntegerMatrix":
        return IntegerMatrix.from_rows(
            [[1 if i == j else 0 for j in range(n)] for i in range(n)]
        )

    @staticmethod
    def zero(rows: int, cols: int) -> "IntegerMatrix":
        return IntegerMatrix(rows, cols, tuple(tuple(0 for _ in range(cols)) for _ in range(rows)))

    def __getitem__(self, idx):
        i, j = idx
        return self.entries[i][j]

    def row(self, i: int) -> tuple:
        return self.entries[i]

    def col(self, j: int) -> tuple:
        return tuple(self.entries[i][j] for i in range(self.rows))

    def transpose(self) -> "IntegerMatrix":
        return IntegerMatrix.from_rows(
            [[self.entries[i][j] for i in range(self.rows)] for j in range(self.cols)]
        )

    def mul(self, other: "IntegerMatrix") -> "IntegerMatrix":
        if self.cols != other.rows:
            raise DimensionMismatch("matrix product shape mismatch")
        out = []
        for i in range(self.rows):
            row = []
            for j in range(other.cols):
                row.append(sum(self.entries[i][k] * other.entries[k][j] for k in range(self.cols)))
            out.append(row)
        return IntegerMatrix.from_rows(out)

    def mul_vec(self, vec) -> tuple:
        if self.cols != len(vec):
            raise DimensionMismatch("matrix-vector shape mismatch")
        return tuple(
            sum(self.entries[i][k] * vec[k] for k in range(self.cols)) for i in range(self.rows)
        )

    def add(self, other: "IntegerMatrix") -> "IntegerMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionMismatch("matrix sum shape mismatch")
        return IntegerMatrix.from_rows(
            [
                [self.entries[i][j] + other.entries[i][j] for j in range(self.cols)]
                for i in range(self.rows)
            ]
        )

    def hstack(self, other: "IntegerMatrix") -> "IntegerMatrix":
        if self.rows != other.rows:
            raise DimensionMismatch("hstack needs equal row counts")
        return IntegerMatrix.from_rows(
            [self.entries[i] + other.entries[i] for i in range(self.rows)]
        )

    def submatrix(self, row_idx, col_idx) -> "IntegerMatrix":
        row_idx, col_idx = list(row_idx), list(col_idx)
        return IntegerMatrix(
            len(row_idx),
            len(col_idx),
            tuple(tuple(self.entries[i][j] for j in col_idx) for i in row_idx),
        )

    def det(self) -> int:
        """Determinant by fraction-free (Bareiss) elimination."""
        if self.rows != self.cols:
            raise DimensionMismatch("determinant of a non-square matrix")
        n = self.rows
        if n == 0:
            return 1
        m = [list(r) for r in self.entries]
        sign = 1
        prev = 1
        for k in range(n - 1):
            if m[k][k] == 0:
                pivot = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
                if pivot is None:
                    return 0
                m[k], m[pivot] = m[pivot], m[k]
                sign = -sign
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
                m[i][k] = 0
            prev = m[k][k]
        return sign * m[n - 1][n - 1]

    def rank(self) -> int:
        return sum(1 for d in _diagonal(smith_normal_form(self).D) if d != 0)

    def to_lists(self):
        return [list(r) for r in self.entries]


def _diagonal(m: IntegerMatrix):
    return [m.entries[i][i] for i in range(min(m.rows, m.cols))]


@dataclass(frozen=True)
class SmithDecomposition:
    """U * A * V = D with U, V unimodular and D = diag(d_1 | d_2 | ...)."""

    U: IntegerMatrix
    D: IntegerMatrix
    V: IntegerMatrix

    @property
    def diagonal(self):
        return _diagonal(self.D)


@dataclass(frozen=True)
class RelationLattice:
    """Saturated integer kernel lattice; columns of ``basis`` span ker(B)."""

    basis: IntegerMatrix

    @property
    def rank(self) -> int:
        return self.basis.cols

    def column(self, a: int) -> tuple:
        return self.basis.col(a)


@dataclass(frozen=True)
class SectionSystem:
    """Matrices C, L, M, D with M*L = I, B*C = I, B*L = 0, M*C = 0 and
    C*B + L*M = I."""

    B: IntegerMatrix
    C: IntegerMatrix
    L: IntegerMatrix
    M: IntegerMatrix
    Dmat: IntegerMatrix

    def verify(self) -> bool:
        B, C, L, M = self.B, self.C, self.L, self.M
        s, t = B.rows, B.cols
        r = t - s
        ok = B.mul(C).entries == IntegerMatrix.identity(s).entries
        ok = ok and M.mul(L).entries == IntegerMatrix.identity(r).entries
        ok = ok and all(x == 0 for row in B.mul(L).entries for x in row)
        ok = ok and all(x == 0 for row in M.mul(C).entries for x in row)
        ok = ok and C.mul(B).add(L.mul(M)).entries == IntegerMatrix.identity(t).entries
        ok = ok and self.Dmat.entries == C.mul(B).transpose().entries
        return ok


def smith_normal_form(A: IntegerMatrix) -> SmithDecomposition:
    """Smith normal form with minimal-absolute-value pivoting.

    Returns unimodular U (rows x rows) and V (cols x cols) with
    U*A*V = D, D diagonal with nonnegative entries and d_i | d_{i+1}.
    """
    nr, nc = A.rows, A.cols
    m = [list(r) for r in A.entries]
    u = [[1 if i == j else 0 for j in range(nr)] for i in range(nr)]
    v = [[1 if i == j else 0 for j in range(nc)] for i in range(nc)]

    def swap_rows(i, j):
        m[i], m[j] = m[j], m[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in m:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, k):
        # row_dst += k * row_src
        for j in range(nc):
            m[dst][j] += k * m[src][j]
        for j in range(nr):
            u[dst][j] += k * u[src][j]

    def add_col(src, dst, k):
        for row in m:
            row[dst] += k * row[src]
        for row in v:
            row[dst] += k * row[src]

    def negate_row(i):
        m[i] = [-x for x in m[i]]
        u[i] = [-x for x in u[i]]

    t = 0
    while t < min(nr, nc):
        # Find the nonzero entry of minimal absolute value in the trailing block.
        best = None
        for i in range(t, nr):
            for j in range(t, nc):
                if m[i][j] != 0 and (best is None or abs(m[i][j]) < abs(m[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        if m[t][t] < 0:
            negate_row(t)
        dirty = False
        for i in range(t + 1, nr):
            if m[i][t] != 0:
                q = m[i][t] // m[t][t]
                add_row(t, i, -q)
                if m[i][t] != 0:
                    dirty = True
        for j in range(t + 1, nc):
            if m[t][j] != 0:
                q = m[t][j] // m[t][t]
                add_col(t, j, -q)
                if m[t][j] != 0:
                    dirty = True
        if dirty:
            continue  # smaller pivot appeared; redo this step
        # Enforce divisibility of the remaining block by the pivot.
        offender = None
        for i in range(t + 1, nr):
            for j in range(t + 1, nc):
                if m[i][j] % m[t][t] != 0:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            add_row(offender, t, 1)
            continue
        t += 1

    d = IntegerMatrix.from_rows(m)
    return SmithDecomposition(IntegerMatrix.from_rows(u), d, IntegerMatrix.from_rows(v))


def kernel_lattice(B: IntegerMatrix) -> RelationLattice:
    """Saturated basis of ker(B) over Z.

    The kernel columns come from the unimodular V of the Smith form, so the
    basis spans ker(B) as a direct summand of Z^t (saturation for free).
    """
    snf = smith_normal_form(B)
    diag = snf.diagonal
    zero_cols = [j for j in range(B.cols) if j >= len(diag) or diag[j] == 0]
    basis = snf.V.submatrix(range(B.cols), zero_cols)
    return RelationLattice(basis)


def section_system(B: IntegerMatrix) -> SectionSystem:
    """Factor B = N1 * (I_s | 0) * N2 and return the section matrices.

    L is the kernel-lattice basis, M a retraction onto it, C a section of B
    and Dmat = (C*B)^T.  Raises :class:`NotSurjective` when the columns of
    B do not generate Z^s.
    """
    s, t = B.rows, B.cols
    snf = smith_normal_form(B)
    diag = snf.diagonal
    if len(diag) < s or any(d != 1 for d in diag[:s]):
        raise NotSurjective("columns do not generate Z^s (Smith diagonal != 1)")
    r = t - s
    # U*B*V = (I_s | 0)  =>  B = U^-1 (I_s|0) V^-1, so N1 = U^-1, N2 = V^-1.
    # L = last r columns of V, C = (first s columns of V) * U, M = last r rows of V^-1.
    L = snf.V.submatrix(range(t), range(s, t))
    C = snf.V.submatrix(range(t), range(s)).mul(snf.U)
    Vinv = _unimodular_inverse(snf.V)
    M = Vinv.submatrix(range(s, t), range(t))
    Dmat = C.mul(B).transpose()
    system = SectionSystem(B=B, C=C, L=L, M=M, Dmat=Dmat)
    if not system.verify():
        raise AssertionError("section-system identities failed; this is a bug")
    return system


def _unimodular_inverse(V: IntegerMatrix) -> IntegerMatrix:
    """Inverse of a unimodular integer matrix, as an integer matrix."""
    n = V.rows
    aug = [[Fraction(V.entries[i][j]) for j in range(n)] + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for col in range(n):
        pivot = next(i for i in range(col, n) if aug[i][col] != 0)
        aug[col], aug[pivot] = aug[pivot], aug[col]
        pv = aug[col][col]
        aug[col] = [x / pv for x in aug[col]]
        for i in range(n):
            if i != col and aug[i][col] != 0:
                f = aug[i][col]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[col])]
    out = []
    for i in range(n):
        row = []
        for j in range(n, 2 * n):
            x = aug[i][j]
            if x.denominator != 1:
                raise ValueError("matrix is not unimodular")
            row.append(int(x))
        out.append(row)
    return IntegerMatrix.from_rows(out)


def extend_relation(l, d: IntegerMatrix, A: IntegerMatrix | None = None) -> tuple:
    """Extend a relation of A to a relation of the total-space matrix A'.

    Appends l_{m+j} = -sum_i l_i d_{ji}.  When A is supplied, A*l = 0 is
    checked first and :class:`NotARelation` raised on failure.
    """
    l = tuple(int(x) for x in l)
    if A is not None:
        if A.cols != len(l):
            raise DimensionMismatch("relation length does not match matrix")
        if any(x != 0 for x in A.mul_vec(l)):
            raise NotARelation("A*l != 0")
    if d.cols != len(l):
        raise DimensionMismatch("bundle matrix column count != relation length")
    tail = tuple(-sum(l[i] * d.entries[j][i] for i in range(len(l))) for j in range(d.rows))
    return l + tail


def homogenize(B: IntegerMatrix) -> IntegerMatrix:
    """The (s+1) x (t+1) matrix with first row all ones and column 0 = e_1.

    Deleting row 0 and column 0 recovers B.
    """
    s, t = B.rows, B.cols
    top = tuple([1] * (t + 1))
    rows = [top]
    for i in range(s):
        rows.append((0,) + B.entries[i])
    return IntegerMatrix.from_rows(rows)


def primitive_vector(vec) -> tuple:
    """vec divided by the gcd of its entries (zero vector unchanged)."""
    g = 0
    for x in vec:
        g = gcd(g, abs(int(x)))
    if g in (0, 1):
        return tuple(int(x) for x in vec)
    return tuple(int(x) // g for x in vec)


def rank_mod_p(M: IntegerMatrix, p: int) -> int:
    """Rank of M over the prime field F_p."""
    m = [[x % p for x in row] for row in M.entries]
    rank = 0
    rows, cols = M.rows, M.cols
    pivot_row = 0
    for col in range(cols):
        piv = next((i for i in range(pivot_row, rows) if m[i][col] % p != 0), None)
        if piv is None:
            continue
        m[pivot_row], m[piv] = m[piv], m[pivot_row]
        inv = pow(m[pivot_row][col], -1, p)
        m[pivot_row] = [(x * inv) % p for x in m[pivot_row]]
        for i in range(rows):
            if i != pivot_row and m[i][col] % p:
                f = m[i][col]
                m[i] = [(a - f * b) % p for a, b in zip(m[i], m[pivot_row])]
        pivot_row += 1
        rank += 1
        if pivot_row == rows:
            break
    return rank
