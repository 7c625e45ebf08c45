"""Immutable matrices over a FieldSpec, with the exact linear algebra the
rest of the package leans on (products, inverses, rank/RREF, nullspaces).

Entries are stored as integer field codes.  Matrices act on column
vectors: the image of v under g is g @ v, and a subspace given by basis
rows U transforms as U . g^T.

Text format (one line): ``n_rows n_cols q; e11 e12 ... e1c e21 ...``
where q is the size of the entry field and entries are integer codes in
row-major order.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .errors import DomainError
from .gf import FieldSpec, field_of_size


@dataclass(frozen=True)
class Matrix:
    spec: FieldSpec
    rows: tuple[tuple[int, ...], ...]

    # -- constructors ---------------------------------------------------
    @staticmethod
    def from_rows(spec: FieldSpec, rows) -> "Matrix":
        tup = tuple(tuple(int(x) for x in r) for r in rows)
        if tup and any(len(r) != len(tup[0]) for r in tup):
            raise DomainError("ragged rows")
        for r in tup:
            for x in r:
                if not 0 <= x < spec.q:
                    raise DomainError("entry %d outside GF(%d)" % (x, spec.q))
        return Matrix(spec, tup)

    @staticmethod
    def identity(spec: FieldSpec, n: int) -> "Matrix":
        return Matrix(spec, tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n)))

    @staticmethod
    def zeros(spec: FieldSpec, n_rows: int, n_cols: int) -> "Matrix":
        return Matrix(spec, tuple((0,) * n_cols for _ in range(n_rows)))

    @property
    def n_rows(self) -> int:
        return len(self.rows)

    @property
    def n_cols(self) -> int:
        return len(self.rows[0]) if self.rows else 0

    def is_square(self) -> bool:
        return self.n_rows == self.n_cols

    # -- arithmetic -------------------------------------------------------
    def __matmul__(self, other: "Matrix") -> "Matrix":
        return self.mul(other)

    def mul(self, other: "Matrix") -> "Matrix":
        if self.spec != other.spec:
            raise DomainError("mixing fields %r and %r" % (self.spec, other.spec))
        if self.n_cols != other.n_rows:
            raise DomainError("shape mismatch %dx%d @ %dx%d"
                              % (self.n_rows, self.n_cols, other.n_rows, other.n_cols))
        f = self.spec
        add, mul = f.add, f.mul
        bt = tuple(zip(*other.rows)) if other.rows else ()
        out = []
        for arow in self.rows:
            orow = []
            for bcol in bt:
                acc = 0
                for a, b in zip(arow, bcol):
                    if a and b:
                        acc = add(acc, mul(a, b))
                orow.append(acc)
            out.append(tuple(orow))
        return Matrix(f, tuple(out))

    def add(self, other: "Matrix") -> "Matrix":
        f = self.spec
        return Matrix(f, tuple(tuple(f.add(a, b) for a, b in zip(r1, r2))
                               for r1, r2 in zip(self.rows, other.rows)))

    def sub(self, other: "Matrix") -> "Matrix":
        f = self.spec
        return Matrix(f, tuple(tuple(f.sub(a, b) for a, b in zip(r1, r2))
                               for r1, r2 in zip(self.rows, other.rows)))

    def scale(self, c: int) -> "Matrix":
        f = self.spec
        return Matrix(f, tuple(tuple(f.mul(c, a) for a in r) for r in self.rows))

    def neg(self) -> "Matrix":
        f = self.spec
        return Matrix(f, tuple(tuple(f.neg(a) for a in r) for r in self.rows))

    def transpose(self) -> "Matrix":
        return Matrix(self.spec, tuple(zip(*self.rows)) if self.rows else ())

    def conjugate(self, k: int) -> "Matrix":
        """Entrywise Frobenius a -> a^(p^k)."""
        f = self.spec
        return Matrix(f, tuple(tuple(f.frobenius(a, k) for a in r) for r in self.rows))

    def conj_transpose(self, k: int) -> "Matrix":
        return self.transpose().conjugate(k)

    def apply(self, v: tuple[int, ...]) -> tuple[int, ...]:
        """Column-vector action: returns self @ v."""
        f = self.spec
        add, mul = f.add, f.mul
        out = []
        for row in self.rows:
            acc = 0
            for a, x in zip(row, v):
                if a and x:
                    acc = add(acc, mul(a, x))
            out.append(acc)
        return tuple(out)

    def row_apply(self, v: tuple[int, ...]) -> tuple[int, ...]:
        """Row-vector action: returns v @ self."""
        f = self.spec
        add, mul = f.add, f.mul
        out = [0] * self.n_cols
        for x, row in zip(v, self.rows):
            if x:
                for j, a in enumerate(row):
                    if a:
                        out[j] = add(out[j], mul(x, a))
        return tuple(out)

    def pow(self, k: int) -> "Matrix":
        if not self.is_square():
            raise DomainError("power of non-square matrix")
        if k < 0:
            return self.inverse().pow(-k)
        result = Matrix.identity(self.spec, self.n_rows)
        base = self
        while k:
            if k & 1:
                result = result.mul(base)
            base = base.mul(base)
            k >>= 1
        return result

    # -- elimination-based queries ---------------------------------------
    def rref(self) -> tuple["Matrix", tuple[int, ...]]:
        """Reduced row echelon form and the pivot column indices."""
        f = self.spec
        rows = [list(r) for r in self.rows]
        n_cols = self.n_cols
        pivots = []
        r = 0
        for c in range(n_cols):
            pivot_row = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
            if pivot_row is None:
                continue
            rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
            inv = f.inv(rows[r][c])
            rows[r] = [f.mul(inv, x) for x in rows[r]]
            for i in range(len(rows)):
                if i != r and rows[i][c] != 0:
                    factor = rows[i][c]
                    rows[i] = [f.sub(x, f.mul(factor, y)) for x, y in zip(rows[i], rows[r])]
            pivots.append(c)
            r += 1
            if r == len(rows):
                break
        return Matrix(f, tuple(tuple(row) for row in rows)), tuple(pivots)

    @cached_property
    def rank(self) -> int:
        return len(self.rref()[1])

    def det(self) -> int:
        if not self.is_square():
            raise DomainError("determinant of non-square matrix")
        f = self.spec
        rows = [list(r) for r in self.rows]
        n = self.n_rows
        det = 1
        for c in range(n):
            pivot_row = next((i for i in range(c, n) if rows[i][c] != 0), None)
            if pivot_row is None:
                return 0
            if pivot_row != c:
                rows[c], rows[pivot_row] = rows[pivot_row], rows[c]
                det = f.neg(det)
            det = f.mul(det, rows[c][c])
            inv = f.inv(rows[c][c])
            for i in range(c + 1, n):
                if rows[i][c] != 0:
                    factor = f.mul(inv, rows[i][c])
                    rows[i] = [f.sub(x, f.mul(factor, y)) for x, y in zip(rows[i], rows[c])]
        return det

    def inverse(self) -> "Matrix":
        if not self.is_square():
            raise DomainError("inverse of non-square matrix")
        f = self.spec
        n = self.n_rows
        aug = [list(r) + [1 if i == j else 0 for j in range(n)]
               for i, r in enumerate(self.rows)]
        r = 0
        for c in range(n):
            pivot_row = next((i for i in range(r, n) if aug[i][c] != 0), None)
            if pivot_row is None:
                raise DomainError("matrix is singular")
            aug[r], aug[pivot_row] = aug[pivot_row], aug[r]
            inv = f.inv(aug[r][c])
            aug[r] = [f.mul(inv, x) for x in aug[r]]
            for i in range(n):
                if i != r and aug[i][c] != 0:
                    factor = aug[i][c]
                    aug[i] = [f.sub(x, f.mul(factor, y)) for x, y in zip(aug[i], aug[r])]
            r += 1
        return Matrix(f, tuple(tuple(row[n:]) for row in aug))

    def nullspace(self) -> tuple[tuple[int, ...], ...]:
        """Basis of {v : self @ v = 0}, one vector per tuple."""
        f = self.spec
        red, pivots = self.rref()
        n = self.n_cols
        free = [c for c in range(n) if c not in pivots]
        basis = []
        for fc in free:
            v = [0] * n
            v[fc] = 1
            for r, pc in enumerate(pivots):
                v[pc] = f.neg(red.rows[r][fc])
            basis.append(tuple(v))
        return tuple(basis)

    def is_identity(self) -> bool:
        if not self.is_square():
            return False
        return all(x == (1 if i == j else 0)
                   for i, r in enumerate(self.rows) for j, x in enumerate(r))

    def order(self, cap: int = 10**7) -> int:
        """Multiplicative order; raises DomainError past cap."""
        if self.is_identity():
            return 1
        g = self
        for k in range(2, cap + 1):
            g = g.mul(self)
            if g.is_identity():
                return k
        raise DomainError("order exceeds cap %d" % cap)

    # -- serialization -----------------------------------------------------
    def to_text(self) -> str:
        flat = " ".join(str(x) for r in self.rows for x in r)
        return f"{self.n_rows} {self.n_cols} {self.spec.q}; {flat}"

    @staticmethod
    def from_text(line: str) -> "Matrix":
        head, _, body = line.partition(";")
        parts = head.split()
        if len(parts) != 3:
            raise DomainError("bad matrix header %r" % head)
        n_rows, n_cols, q = (int(x) for x in parts)
        spec = field_of_size(q)
        entries = [int(x) for x in body.split()]
        if len(entries) != n_rows * n_cols:
            raise DomainError("expected %d entries, got %d" % (n_rows * n_cols, len(entries)))
        rows = [entries[i * n_cols:(i + 1) * n_cols] for i in range(n_rows)]
        return Matrix.from_rows(spec, rows)

    def __repr__(self):
        return "Matrix(%dx%d over GF(%d))" % (self.n_rows, self.n_cols, self.spec.q)


def block_diag(spec: FieldSpec, blocks: list[Matrix]) -> Matrix:
    n = sum(b.n_rows for b in blocks)
    rows = [[0] * n for _ in range(n)]
    off = 0
    for b in blocks:
        for i, r in enumerate(b.rows):
            for j, x in enumerate(r):
                rows[off + i][off + j] = x
        off += b.n_rows
    return Matrix.from_rows(spec, rows)


def stack_rows(spec: FieldSpec, mats: list[Matrix]) -> Matrix:
    rows = []
    for m in mats:
        rows.extend(m.rows)
    return Matrix(spec, tuple(rows))
