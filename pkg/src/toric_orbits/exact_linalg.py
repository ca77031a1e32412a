"""Exact integer and rational linear algebra.

Everything here works on Python ints and :class:`fractions.Fraction`, so no
computation can overflow or round.  Matrices are small (desk scale), and the
routines favour determinism over speed.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Optional, Sequence

RatVector = tuple  # tuple of Fraction (or int) entries


@dataclass(frozen=True)
class IntMatrix:
    """Immutable integer matrix stored row-major."""

    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("matrix dimensions must be nonnegative")
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"expected {self.rows * self.cols} entries, got {len(self.entries)}"
            )

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence[int]], cols: Optional[int] = None) -> "IntMatrix":
        data = [tuple(int(x) for x in row) for row in rows]
        if cols is None:
            cols = len(data[0]) if data else 0
        for row in data:
            if len(row) != cols:
                raise ValueError("ragged rows")
        return cls(len(data), cols, tuple(x for row in data for x in row))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols, (0,) * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, tuple(int(i == j) for i in range(n) for j in range(n)))

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def column(self, j: int) -> tuple:
        return self.entries[j::self.cols] if self.cols else ()

    def tolist(self) -> list:
        return [list(self.row(i)) for i in range(self.rows)]

    def transpose(self) -> "IntMatrix":
        return IntMatrix(self.cols, self.rows,
                         tuple(self[i, j] for j in range(self.cols) for i in range(self.rows)))

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        ocols = [other.column(j) for j in range(other.cols)]
        out = []
        for i in range(self.rows):
            r = self.row(i)
            out.extend(sum(a * b for a, b in zip(r, c)) for c in ocols)
        return IntMatrix(self.rows, other.cols, tuple(out))

    @property
    def shape(self) -> tuple:
        return (self.rows, self.cols)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "IntMatrix":
        return IntMatrix(len(rows), len(cols), tuple(self[i, j] for i in rows for j in cols))

    def __repr__(self):
        return f"IntMatrix({self.tolist()!r})"


def as_int_matrix(M) -> IntMatrix:
    if isinstance(M, IntMatrix):
        return M
    return IntMatrix.from_rows(M)


def _rows(M: IntMatrix) -> list:
    return [list(M.row(i)) for i in range(M.rows)]


def rational_rank(M) -> int:
    """Rank over Q via fraction-free (Bareiss) elimination."""
    M = as_int_matrix(M)
    a = _rows(M)
    nrows, ncols = M.rows, M.cols
    rank = 0
    prev = 1
    for c in range(ncols):
        if rank == nrows:
            break
        piv = next((i for i in range(rank, nrows) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        p = a[rank][c]
        for i in range(rank + 1, nrows):
            aic = a[i][c]
            row_i, row_r = a[i], a[rank]
            for j in range(c + 1, ncols):
                row_i[j] = (p * row_i[j] - aic * row_r[j]) // prev
            row_i[c] = 0
        prev = p
        rank += 1
    return rank


def determinant(M) -> int:
    """Exact determinant of a square integer matrix (Bareiss)."""
    M = as_int_matrix(M)
    n = M.rows
    if n != M.cols:
        raise ValueError("determinant of a non-square matrix")
    e = M.entries
    # closed forms keep the hot path in the matroid code cheap
    if n == 0:
        return 1
    if n == 1:
        return e[0]
    if n == 2:
        return e[0] * e[3] - e[1] * e[2]
    if n == 3:
        return (e[0] * (e[4] * e[8] - e[5] * e[7])
                - e[1] * (e[3] * e[8] - e[5] * e[6])
                + e[2] * (e[3] * e[7] - e[4] * e[6]))
    a = _rows(M)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def _rref(rows: list, ncols: int) -> tuple:
    """Reduced row echelon form over Q.  Returns (rows, pivot_columns)."""
    a = [[Fraction(x) for x in r] for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        p = a[r][c]
        a[r] = [x / p for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    return a, pivots


def primitive_integer_vector(v: Sequence) -> tuple:
    """Scale a rational vector to coprime integers, first nonzero entry positive."""
    fr = [Fraction(x) for x in v]
    den = 1
    for x in fr:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in fr]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        return tuple(ints)
    lead = next(x for x in ints if x != 0)
    if lead < 0:
        g = -g
    return tuple(x // g for x in ints)


def kernel_basis(M) -> list:
    """Basis of the rational null space ``{x : Mx = 0}``.

    Vectors come back as coprime integer tuples with first nonzero entry
    positive, one per free column of the reduced echelon form.
    """
    M = as_int_matrix(M)
    a, pivots = _rref(_rows(M), M.cols)
    free = [c for c in range(M.cols) if c not in pivots]
    basis = []
    for fcol in free:
        x = [Fraction(0)] * M.cols
        x[fcol] = Fraction(1)
        for row, pc in zip(a, pivots):
            x[pc] = -row[fcol]
        basis.append(primitive_integer_vector(x))
    return basis


def solve_affine(A, b: Sequence, fixed_zero: Iterable[int] = ()) -> Optional[RatVector]:
    """Some exact solution of ``Ax = b`` with ``x_i = 0`` for i in `fixed_zero`.

    Free variables are set to zero.  Returns None when the system is
    inconsistent.  No sign constraint is imposed.
    """
    A = as_int_matrix(A)
    if len(b) != A.rows:
        raise ValueError(f"right-hand side has length {len(b)}, expected {A.rows}")
    fixed = set(fixed_zero)
    bad = [i for i in fixed if not 0 <= i < A.cols]
    if bad:
        raise IndexError(f"column indices out of range: {sorted(bad)}")
    live = [j for j in range(A.cols) if j not in fixed]
    aug = [[A[i, j] for j in live] + [b[i]] for i in range(A.rows)]
    a, pivots = _rref(aug, len(live) + 1)
    if len(live) in pivots:
        return None
    x = [Fraction(0)] * A.cols
    for row, pc in zip(a, pivots):
        x[live[pc]] = row[-1]
    return tuple(x)


@dataclass(frozen=True)
class SnfResult:
    """``U @ M @ V == D`` with unimodular U, V and D in Smith form."""

    U: IntMatrix
    D: IntMatrix
    V: IntMatrix

    @property
    def diagonal(self) -> tuple:
        n = min(self.D.rows, self.D.cols)
        return tuple(self.D[i, i] for i in range(n))

    @property
    def invariant_factors(self) -> tuple:
        return tuple(d for d in self.diagonal if d != 0)


def smith_normal_form(M, transforms: bool = True) -> SnfResult:
    """Smith normal form over Z.

    Pivot rule: the nonzero entry of smallest absolute value in the active
    submatrix, ties broken by (row, col).  With ``transforms=False`` U and V
    are returned as None, which is all the homology code needs.
    """
    M = as_int_matrix(M)
    g, f = M.rows, M.cols
    a = _rows(M)
    U = [[int(i == j) for j in range(g)] for i in range(g)] if transforms else None
    V = [[int(i == j) for j in range(f)] for i in range(f)] if transforms else None

    def add_row(dst, src, q):  # row_dst -= q * row_src
        ra, rs = a[dst], a[src]
        for j in range(f):
            if rs[j]:
                ra[j] -= q * rs[j]
        if U is not None:
            ua, us = U[dst], U[src]
            for j in range(g):
                if us[j]:
                    ua[j] -= q * us[j]

    def add_col(dst, src, q):  # col_dst -= q * col_src
        for row in a:
            if row[src]:
                row[dst] -= q * row[src]
        if V is not None:
            for row in V:
                if row[src]:
                    row[dst] -= q * row[src]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        if U is not None:
            U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        if V is not None:
            for row in V:
                row[i], row[j] = row[j], row[i]

    for t in range(min(g, f)):
        while True:
            best = None
            for i in range(t, g):
                row = a[i]
                for j in range(t, f):
                    v = row[j]
                    if v and (best is None or abs(v) < best[0]):
                        best = (abs(v), i, j)
            if best is None:
                break
            _, pi, pj = best
            if pi != t:
                swap_rows(t, pi)
            if pj != t:
                swap_cols(t, pj)
            p = a[t][t]
            for i in range(t + 1, g):
                if a[i][t]:
                    add_row(i, t, a[i][t] // p)
            for j in range(t + 1, f):
                if a[t][j]:
                    add_col(j, t, a[t][j] // p)
            if any(a[i][t] for i in range(t + 1, g)) or any(a[t][j] for j in range(t + 1, f)):
                continue
            offender = next(
                ((i, j) for i in range(t + 1, g) for j in range(t + 1, f) if a[i][j] % p),
                None,
            )
            if offender is None:
                break
            # pull the non-divisible row into row t; the next pass shrinks the pivot
            add_row(t, offender[0], -1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            if U is not None:
                U[t] = [-x for x in U[t]]
        if a[t][t] == 0:
            break

    D = IntMatrix.from_rows(a, f)
    if not transforms:
        return SnfResult(None, D, None)
    return SnfResult(IntMatrix.from_rows(U, g), D, IntMatrix.from_rows(V, f))


def is_smith_form(D: IntMatrix) -> bool:
    n = min(D.rows, D.cols)
    for i in range(D.rows):
        for j in range(D.cols):
            if i != j and D[i, j] != 0:
                return False
    diag = [D[i, i] for i in range(n)]
    if any(d < 0 for d in diag):
        return False
    seen_zero = False
    for i, d in enumerate(diag):
        if d == 0:
            seen_zero = True
        elif seen_zero:
            return False
        if i + 1 < n and d != 0 and diag[i + 1] % d:
            return False
    return True


def inverse_unimodular(M) -> IntMatrix:
    """Integer inverse of a unimodular matrix (Gauss-Jordan over Q, checked)."""
    M = as_int_matrix(M)
    n = M.rows
    if n != M.cols:
        raise ValueError("not square")
    aug = [list(M.row(i)) + [int(i == j) for j in range(n)] for i in range(n)]
    a, pivots = _rref(aug, 2 * n)
    if pivots[:n] != list(range(n)):
        raise ValueError("matrix is singular")
    out = []
    for row in a[:n]:
        tail = row[n:]
        if any(x.denominator != 1 for x in tail):
            raise ValueError("matrix is not unimodular")
        out.append([int(x) for x in tail])
    return IntMatrix.from_rows(out, n)
