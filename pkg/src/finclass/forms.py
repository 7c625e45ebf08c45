"""Formed spaces: a dimension-n space over GF(q^delta) carrying a zero,
symplectic, quadratic(eps) or unitary form, plus the standard models used
everywhere else.

Standard layout (uniform across kinds): hyperbolic pairs (i, h+i) for
i = 0..h-1 where h is the Witt index, followed by the anisotropic tail.
Concretely, with 0-based coordinates:

  zero          gram = 0, h = floor(n/2) (pairing is layout only)
  symplectic    n = 2h, gram[i, h+i] = 1, gram[h+i, i] = -1
  quadratic +   n = 2h, Q = sum x_i x_{h+i}
  quadratic -   n = 2h+2 with h = n/2 - 1: hyperbolic pairs plus the
                anisotropic plane Q = x^2 + xy + d y^2 on the last two
                coordinates (t^2 + t + d irreducible, least such d)
  quadratic o   n = 2h+1, hyperbolic pairs plus Q = x^2 on the last
                coordinate (odd characteristic only)
  unitary       gram[i, h+i] = gram[h+i, i] = 1; odd n adds gram[n-1,n-1] = 1

Quadratic forms are stored via their upper-triangular part `quad` with
gram = quad + quad^T, which is the char-2-safe convention and agrees with
the polar form of Q(v) = v^T quad v in odd characteristic.

The first m coordinates always span a totally singular m-space for
m <= h; that is the standard point whose stabilizer plays the maximal
parabolic everywhere downstream.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError, UnsupportedFamilyError
from .gf import FieldSpec, field_of_size, make_field
from .matrix import Matrix

KINDS = ("zero", "symplectic", "quadratic", "unitary")


@dataclass(frozen=True)
class FormedSpace:
    n: int
    kind: str
    eps: int | None  # +1 | -1 | 0 (odd-dimensional); None for zero/symplectic/unitary
    field: FieldSpec  # entry field GF(q^delta)
    delta: int  # 2 iff unitary
    gram: Matrix
    quad: Matrix | None  # upper triangular; present iff kind == quadratic

    @property
    def base_q(self) -> int:
        """q such that entries live in GF(q^delta)."""
        if self.delta == 2:
            r = math.isqrt(self.field.q)
            assert r * r == self.field.q
            return r
        return self.field.q

    @property
    def witt_index(self) -> int:
        if self.kind in ("zero", "symplectic", "unitary"):
            return self.n // 2
        if self.kind == "quadratic":
            if self.eps == 1:
                return self.n // 2
            if self.eps == -1:
                return self.n // 2 - 1
            return (self.n - 1) // 2
        raise DomainError("unknown kind %r" % self.kind)

    @property
    def sigma_power(self) -> int:
        """Frobenius exponent of the form's conjugation (0 = identity)."""
        return self.field.e // 2 if self.delta == 2 else 0

    def hyperbolic_pairs(self) -> tuple[tuple[int, int], ...]:
        h = self.witt_index
        return tuple((i, h + i) for i in range(h))

    def conj(self, a: int) -> int:
        return self.field.frobenius(a, self.sigma_power) if self.delta == 2 else a

    # -- values -----------------------------------------------------------
    def pair(self, u: tuple[int, ...], v: tuple[int, ...]) -> int:
        """B(u, v) = u^T gram v^sigma (sigma = unitary conjugation or identity)."""
        f = self.field
        acc = 0
        for i, ui in enumerate(u):
            if not ui:
                continue
            row = self.gram.rows[i]
            for j, gij in enumerate(row):
                if gij and v[j]:
                    acc = f.add(acc, f.mul(ui, f.mul(gij, self.conj(v[j]))))
        return acc

    def quad_value(self, v: tuple[int, ...]) -> int:
        if self.kind != "quadratic":
            raise DomainError("no quadratic part on kind %r" % self.kind)
        f = self.field
        acc = 0
        for i, vi in enumerate(v):
            if not vi:
                continue
            row = self.quad.rows[i]
            for j in range(i, len(v)):
                if row[j] and v[j]:
                    acc = f.add(acc, f.mul(vi, f.mul(row[j], v[j])))
        return acc

    def is_singular_vector(self, v: tuple[int, ...]) -> bool:
        if self.kind == "zero":
            return True
        if self.kind == "quadratic":
            return self.quad_value(v) == 0
        return self.pair(v, v) == 0

    def is_totally_singular(self, rows) -> bool:
        rows = [tuple(r) for r in rows]
        for i, u in enumerate(rows):
            if not self.is_singular_vector(u):
                return False
            for v in rows[i + 1:]:
                if self.pair(u, v) != 0:
                    return False
        return True


def least_anisotropic_d(field: FieldSpec) -> int:
    """Least d with t^2 + t + d irreducible over the field."""
    for d in field.elements():
        if all(field.add(field.add(field.mul(t, t), t), d) != 0 for t in field.elements()):
            return d
    raise DomainError("no anisotropic parameter in GF(%d)" % field.q)


def _quad_space(n: int, eps: int, field: FieldSpec) -> FormedSpace:
    f = field
    quad = [[0] * n for _ in range(n)]
    if eps == 1:
        if n % 2:
            raise DomainError("plus-type quadratic space needs even dimension")
        h = n // 2
        for i in range(h):
            quad[i][h + i] = 1
    elif eps == -1:
        if n % 2 or n < 2:
            raise DomainError("minus-type quadratic space needs even dimension >= 2")
        h = n // 2 - 1
        for i in range(h):
            quad[i][h + i] = 1
        d = least_anisotropic_d(f)
        quad[n - 2][n - 2] = 1
        quad[n - 2][n - 1] = 1
        quad[n - 1][n - 1] = d
    elif eps == 0:
        if n % 2 == 0:
            raise DomainError("odd-type quadratic space needs odd dimension")
        if f.p == 2:
            raise UnsupportedFamilyError("odd-dimensional orthogonal space in characteristic 2")
        h = n // 2
        for i in range(h):
            quad[i][h + i] = 1
        quad[n - 1][n - 1] = 1
    else:
        raise DomainError("eps must be +1, -1 or 0")
    quad_m = Matrix.from_rows(f, quad)
    gram = quad_m.add(quad_m.transpose())
    return FormedSpace(n, "quadratic", eps, f, 1, gram, quad_m)


def _pe(q: int) -> tuple[int, int]:
    spec = field_of_size(q)
    return spec.p, spec.e


def formed_space(n: int, kind: str, q: int, eps: int | None = None) -> FormedSpace:
    """The standard formed space of the given kind over base field size q."""
    if n < 1:
        raise DomainError("dimension must be positive")
    if kind == "zero":
        f = make_field(*_pe(q))
        return FormedSpace(n, "zero", None, f, 1, Matrix.zeros(f, n, n), None)
    if kind == "symplectic":
        if n % 2:
            raise DomainError("symplectic space needs even dimension")
        f = make_field(*_pe(q))
        h = n // 2
        gram = [[0] * n for _ in range(n)]
        for i in range(h):
            gram[i][h + i] = 1
            gram[h + i][i] = f.neg(1)
        return FormedSpace(n, "symplectic", None, f, 1, Matrix.from_rows(f, gram), None)
    if kind == "quadratic":
        f = make_field(*_pe(q))
        return _quad_space(n, eps if eps is not None else 1, f)
    if kind == "unitary":
        p, e = _pe(q)
        f = make_field(p, 2 * e)
        h = n // 2
        gram = [[0] * n for _ in range(n)]
        for i in range(h):
            gram[i][h + i] = 1
            gram[h + i][i] = 1
        if n % 2:
            gram[n - 1][n - 1] = 1
        return FormedSpace(n, "unitary", None, f, 2, Matrix.from_rows(f, gram), None)
    raise DomainError("unknown form kind %r" % kind)


def preserves_form(g: Matrix, space: FormedSpace) -> bool:
    """True iff g^T gram g^sigma = gram and, for quadratic kind, Q(g e_i) = Q(e_i).

    Together with the gram condition the basis-image check pins Q on the
    whole space via the polar identity Q(u+v) = Q(u) + Q(v) + B(u,v).
    """
    if g.n_rows != space.n or g.n_cols != space.n:
        raise DomainError("element dimension %d != space dimension %d" % (g.n_rows, space.n))
    if g.spec != space.field:
        raise DomainError("element field %r != space field %r" % (g.spec, space.field))
    sig = space.sigma_power
    gs = g.conjugate(sig) if sig else g
    if g.transpose().mul(space.gram).mul(gs).rows != space.gram.rows:
        return False
    if space.kind == "quadratic":
        for i, col in enumerate(g.transpose().rows):  # column i = image of e_i
            if space.quad_value(col) != space.quad.rows[i][i]:
                return False
    return True


def symplectic_basis(gram: Matrix) -> Matrix:
    """Hyperbolic basis for a nonsingular alternating form.

    Returns S whose columns (u_1..u_h, v_1..v_h) satisfy
    S^T gram S = standard symplectic gram in (i, h+i) pair layout.
    """
    f = gram.spec
    n = gram.n_rows
    if n % 2:
        raise DomainError("alternating form on odd dimension is singular")

    def b(u, v):
        acc = 0
        for i, ui in enumerate(u):
            if ui:
                for j, gij in enumerate(gram.rows[i]):
                    if gij and v[j]:
                        acc = f.add(acc, f.mul(ui, f.mul(gij, v[j])))
        return acc

    basis = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    us, vs = [], []
    while basis:
        u = basis[0]
        j = next((t for t in range(1, len(basis)) if b(u, basis[t]) != 0), None)
        if j is None:
            raise DomainError("form is degenerate")
        v = basis[j]
        scale = f.inv(b(u, v))
        v = tuple(f.mul(scale, x) for x in v)
        us.append(u)
        vs.append(v)
        rest = [w for t, w in enumerate(basis) if t not in (0, j)]
        new_basis = []
        for w in rest:
            cv = b(w, v)  # coefficient along u
            cu = b(u, w)  # coefficient along v
            wp = tuple(
                f.sub(f.sub(w[i], f.mul(cv, u[i])), f.mul(cu, v[i])) for i in range(n)
            )
            new_basis.append(wp)
        basis = new_basis
    cols = us + vs
    return Matrix.from_rows(f, list(zip(*cols)))
