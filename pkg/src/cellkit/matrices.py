"""Exact integer matrix arithmetic and the Smith normal form.

Everything runs on Python's unbounded integers: invariant factors of even
small random matrices overflow 64-bit types, so no fixed-width arithmetic
appears anywhere.  The Smith normal form returns the change-of-basis
matrices together with their inverses; the homology and truncation code
uses those to extract kernel bases, solve linear systems and rewrite
cycles in kernel coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence


class MatrixShapeError(ValueError):
    """Inconsistent matrix dimensions."""


@dataclass(frozen=True)
class IntMatrix:
    """Immutable integer matrix, entries stored row-major.

    >>> m = IntMatrix.from_rows([[2, 4], [6, 8]])
    >>> m.entry(1, 0)
    6
    """

    rows: int
    cols: int
    entries: tuple[int, ...] = ()

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise MatrixShapeError(f"negative shape {self.rows}x{self.cols}")
        ents = tuple(int(e) for e in self.entries)
        if len(ents) != self.rows * self.cols:
            raise MatrixShapeError(
                f"{self.rows}x{self.cols} matrix needs {self.rows * self.cols}"
                f" entries, got {len(ents)}"
            )
        object.__setattr__(self, "entries", ents)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "IntMatrix":
        r = len(rows)
        c = len(rows[0]) if r else 0
        if any(len(row) != c for row in rows):
            raise MatrixShapeError("ragged rows")
        return cls(r, c, tuple(int(x) for row in rows for x in row))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, tuple(1 if i == j else 0 for i in range(n) for j in range(n)))

    @classmethod
    def zero(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols, (0,) * (rows * cols))

    @classmethod
    def diagonal(cls, diag: Sequence[int], rows: int | None = None,
                 cols: int | None = None) -> "IntMatrix":
        r = len(diag) if rows is None else rows
        c = len(diag) if cols is None else cols
        if len(diag) > min(r, c):
            raise MatrixShapeError("diagonal longer than matrix")
        ents = [0] * (r * c)
        for i, d in enumerate(diag):
            ents[i * c + i] = int(d)
        return cls(r, c, tuple(ents))

    def entry(self, i: int, j: int) -> int:
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError((i, j))
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def column(self, j: int) -> tuple[int, ...]:
        return self.entries[j::self.cols] if self.cols else ()

    def to_rows(self) -> list[list[int]]:
        c = self.cols
        return [list(self.entries[i * c:(i + 1) * c]) for i in range(self.rows)]

    def take(self, row_idx: Sequence[int] | None = None,
             col_idx: Sequence[int] | None = None) -> "IntMatrix":
        """Submatrix on the given row/column indices (None keeps all)."""
        ri = list(range(self.rows)) if row_idx is None else list(row_idx)
        ci = list(range(self.cols)) if col_idx is None else list(col_idx)
        ents = tuple(self.entry(i, j) for i in ri for j in ci)
        return IntMatrix(len(ri), len(ci), ents)

    def transpose(self) -> "IntMatrix":
        return IntMatrix.from_rows(
            [[self.entry(i, j) for i in range(self.rows)] for j in range(self.cols)])

    def __neg__(self) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols, tuple(-e for e in self.entries))

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise MatrixShapeError(
                f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        n, m, k = self.rows, other.cols, self.cols
        a, b = self.entries, other.entries
        out = [0] * (n * m)
        for i in range(n):
            arow = a[i * k:(i + 1) * k]
            base = i * m
            for t in range(k):
                x = arow[t]
                if x:
                    brow = b[t * m:(t + 1) * m]
                    for j in range(m):
                        out[base + j] += x * brow[j]
        return IntMatrix(n, m, tuple(out))

    def apply(self, vec: Sequence[int]) -> tuple[int, ...]:
        if len(vec) != self.cols:
            raise MatrixShapeError("vector length mismatch")
        return tuple(
            sum(self.entry(i, j) * vec[j] for j in range(self.cols))
            for i in range(self.rows))

    @property
    def is_zero(self) -> bool:
        return not any(self.entries)

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def det(self) -> int:
        """Determinant by fraction-free (Bareiss) elimination.

        >>> IntMatrix.from_rows([[2, 4], [6, 8]]).det()
        -8
        """
        if not self.is_square:
            raise MatrixShapeError("determinant of a non-square matrix")
        n = self.rows
        if n == 0:
            return 1
        a = self.to_rows()
        sign = 1
        prev = 1
        for k in range(n - 1):
            if a[k][k] == 0:
                pivot = next((i for i in range(k + 1, n) if a[i][k]), None)
                if pivot is None:
                    return 0
                a[k], a[pivot] = a[pivot], a[k]
                sign = -sign
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
                a[i][k] = 0
            prev = a[k][k]
        return sign * a[n - 1][n - 1]

    def to_json(self) -> dict:
        return {"rows": self.rows, "cols": self.cols, "data": list(self.entries)}

    @classmethod
    def from_json(cls, obj: dict) -> "IntMatrix":
        return cls(int(obj["rows"]), int(obj["cols"]),
                   tuple(int(x) for x in obj["data"]))

    def __str__(self) -> str:
        if self.rows == 0 or self.cols == 0:
            return f"<empty {self.rows}x{self.cols}>"
        return "\n".join(" ".join(str(x) for x in self.row(i)) for i in range(self.rows))

    @cached_property
    def _snf(self) -> "SmithNormalForm":
        return _compute_snf(self)


def hstack(mats: Sequence[IntMatrix]) -> IntMatrix:
    mats = [m for m in mats]
    if not mats:
        return IntMatrix.zero(0, 0)
    r = mats[0].rows
    if any(m.rows != r for m in mats):
        raise MatrixShapeError("hstack with differing row counts")
    rows = [[x for m in mats for x in m.row(i)] for i in range(r)]
    if not rows:
        return IntMatrix.zero(0, sum(m.cols for m in mats))
    return IntMatrix.from_rows(rows)


def vstack(mats: Sequence[IntMatrix]) -> IntMatrix:
    mats = [m for m in mats]
    if not mats:
        return IntMatrix.zero(0, 0)
    c = mats[0].cols
    if any(m.cols != c for m in mats):
        raise MatrixShapeError("vstack with differing column counts")
    total = sum(m.rows for m in mats)
    ents = tuple(x for m in mats for x in m.entries)
    return IntMatrix(total, c, ents)


def block(grid: Sequence[Sequence[IntMatrix]]) -> IntMatrix:
    """Assemble a block matrix from a grid of compatible blocks."""
    return vstack([hstack(row) for row in grid])


@dataclass(frozen=True)
class SmithNormalForm:
    """Certified decomposition ``s == u @ m @ v`` with unimodular u, v.

    ``s`` is diagonal with nonnegative entries satisfying the divisibility
    chain d1 | d2 | ...; the nonzero entries occupy a leading prefix of the
    diagonal.  ``u_inv`` and ``v_inv`` are the exact inverses, accumulated
    during the reduction.
    """

    matrix: IntMatrix
    s: IntMatrix
    u: IntMatrix
    v: IntMatrix
    u_inv: IntMatrix
    v_inv: IntMatrix

    @property
    def diagonal(self) -> tuple[int, ...]:
        n = min(self.s.rows, self.s.cols)
        return tuple(self.s.entry(i, i) for i in range(n))

    @property
    def nonzero_diagonal(self) -> tuple[int, ...]:
        return tuple(d for d in self.diagonal if d)

    @property
    def rank(self) -> int:
        return len(self.nonzero_diagonal)


def _eye_rows(n: int) -> list[list[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def _compute_snf(m: IntMatrix) -> SmithNormalForm:
    nr, nc = m.rows, m.cols
    a = m.to_rows()
    u = _eye_rows(nr)
    uinv = _eye_rows(nr)
    v = _eye_rows(nc)
    vinv = _eye_rows(nc)

    # Row operation A <- E A keeps u <- E u and uinv <- uinv E^{-1};
    # column operation A <- A F keeps v <- v F and vinv <- F^{-1} vinv.

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]
        for row in uinv:
            row[i], row[j] = row[j], row[i]

    def add_row(i, j, q):  # row_i += q * row_j
        ai, aj = a[i], a[j]
        for t in range(nc):
            ai[t] += q * aj[t]
        ui, uj = u[i], u[j]
        for t in range(nr):
            ui[t] += q * uj[t]
        for row in uinv:
            row[j] -= q * row[i]

    def negate_row(i):
        a[i] = [-x for x in a[i]]
        u[i] = [-x for x in u[i]]
        for row in uinv:
            row[i] = -row[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]
        vinv[i], vinv[j] = vinv[j], vinv[i]

    def add_col(j, i, q):  # col_j += q * col_i
        for row in a:
            row[j] += q * row[i]
        for row in v:
            row[j] += q * row[i]
        ri, rj = vinv[i], vinv[j]
        for t in range(nc):
            ri[t] -= q * rj[t]

    t = 0
    limit = min(nr, nc)
    while t < limit:
        # Pivot: the nonzero entry of minimal absolute value in the active
        # submatrix, row-then-column position breaking ties.  Keeps entry
        # growth modest and makes the reduction deterministic.
        pi = pj = -1
        best = 0
        for i in range(t, nr):
            arow = a[i]
            for j in range(t, nc):
                x = arow[j]
                if x and (best == 0 or -best < x < best):
                    best = abs(x)
                    pi, pj = i, j
        if pi < 0:
            break
        if pi != t:
            swap_rows(t, pi)
        if pj != t:
            swap_cols(t, pj)
        if a[t][t] < 0:
            negate_row(t)
        while True:
            dirty = False
            for i in range(t + 1, nr):
                while a[i][t]:
                    q = a[i][t] // a[t][t]
                    if q:
                        add_row(i, t, -q)
                    if a[i][t]:  # remainder is a strictly smaller pivot
                        swap_rows(t, i)
                        dirty = True
            for j in range(t + 1, nc):
                while a[t][j]:
                    q = a[t][j] // a[t][t]
                    if q:
                        add_col(j, t, -q)
                    if a[t][j]:
                        swap_cols(t, j)
                        dirty = True
            if dirty:
                continue
            p = a[t][t]
            bad_row = None
            for i in range(t + 1, nr):
                arow = a[i]
                for j in range(t + 1, nc):
                    if arow[j] % p:
                        bad_row = i
                        break
                if bad_row is not None:
                    break
            if bad_row is None:
                break
            # Pivot must divide the rest of the submatrix; pulling the
            # offending row up forces a smaller pivot on the next pass.
            add_row(t, bad_row, 1)
        t += 1

    def freeze(rows, r, c):
        return IntMatrix(r, c, tuple(x for row in rows for x in row))

    return SmithNormalForm(
        matrix=m,
        s=freeze(a, nr, nc),
        u=freeze(u, nr, nr),
        v=freeze(v, nc, nc),
        u_inv=freeze(uinv, nr, nr),
        v_inv=freeze(vinv, nc, nc),
    )


def smith_normal_form(m: IntMatrix) -> SmithNormalForm:
    """Smith normal form of ``m`` (cached on the matrix).

    >>> f = smith_normal_form(IntMatrix.from_rows([[2, 4], [6, 8]]))
    >>> f.diagonal
    (2, 4)
    >>> f.u @ f.matrix @ f.v == f.s
    True
    """
    return m._snf


def rank(m: IntMatrix) -> int:
    if m.rows == 0 or m.cols == 0:
        return 0
    return smith_normal_form(m).rank


def kernel_basis(m: IntMatrix) -> IntMatrix:
    """Matrix whose columns are a basis of ker(m) inside Z^cols.

    The kernel of an integer matrix is a direct summand, so the columns are
    an honest basis, not just generators.
    """
    if m.cols == 0:
        return IntMatrix.zero(0, 0)
    if m.rows == 0:
        return IntMatrix.identity(m.cols)
    f = smith_normal_form(m)
    r = f.rank
    return f.v.take(None, range(r, m.cols))


def solve(m: IntMatrix, rhs: Sequence[int]) -> tuple[int, ...] | None:
    """One integer solution x of ``m @ x = rhs``, or None if there is none."""
    if len(rhs) != m.rows:
        raise MatrixShapeError("right-hand side length mismatch")
    if m.cols == 0:
        return () if not any(rhs) else None
    f = smith_normal_form(m)
    c = f.u.apply(rhs)
    diag = f.diagonal
    y = [0] * m.cols
    for i in range(m.rows):
        d = diag[i] if i < len(diag) else 0
        if d:
            if c[i] % d:
                return None
            y[i] = c[i] // d
        elif c[i]:
            return None
    return f.v.apply(y)
