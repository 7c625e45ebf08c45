"""Finite 2-groups and their almost-free embeddings into classical groups.

A 2-group enters as a multiplication table (cyclic groups and direct
products come with constructors, and the CLI grammar C2, C4, C2xC2, ...
parses to them).  The embedding splits the natural module as

    V = R^2 _|_ ... _|_ R^2 _|_ I

with k/2 copies of the doubled regular module on hyperbolic blocks of
the standard form and the trivial module of dimension s at the end,
where n = k|A| + s, k even, 2 <= s < 2|A| + 2.  On a doubled copy the
group acts as rho(g) on the left half and rho(g)^{-T,sigma} on the
right half, which preserves the hyperbolic pairing for every form kind
at once and has determinant 1.

Below the classical threshold n >= 2|A| + 2 the even-k split does not
exist, but smaller targets still admit almost-free module structures
R^k (+) I with k odd: a zero form puts no constraint on the lone
unpaired copy, and in characteristic 2 a symplectic form restricted to
it can be realized because the regular module carries the invariant
alternating pairing B(e_g, e_h) = [g^{-1}h = z] for any involution z.
The embedding uses that fallback (largest k with s >= 2) when the
standard split is impossible and the target's form kind supports it.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass

from .errors import DomainError, RankTooSmallError, UnsupportedFamilyError
from .forms import symplectic_basis
from .groups import GroupAtlas, atlas as make_atlas
from .matrix import Matrix


class TwoGroup:
    """A finite 2-group as a multiplication table with identity 0."""

    def __init__(self, table, label: str = "table"):
        self.table = tuple(tuple(int(x) for x in row) for row in table)
        self.order = len(self.table)
        self.label = label
        self._validate()

    def _validate(self):
        a = self.order
        if a < 1 or (a & (a - 1)):
            raise DomainError("group order %d is not a power of 2" % a)
        for row in self.table:
            if len(row) != a or sorted(row) != list(range(a)):
                raise DomainError("multiplication table rows must be permutations")
        if any(self.table[0][j] != j or self.table[j][0] != j for j in range(a)):
            raise DomainError("element 0 must be the identity")
        for i in range(a):
            if all(self.table[i][j] != 0 for j in range(a)):
                raise DomainError("element %d has no inverse" % i)
        for i in range(a):
            for j in range(a):
                for k in range(a):
                    if self.table[self.table[i][j]][k] != self.table[i][self.table[j][k]]:
                        raise DomainError("multiplication table is not associative")
        for i in range(a):
            if self.element_order(i) & (self.element_order(i) - 1):
                raise DomainError("element order is not a power of 2")

    def mul(self, i: int, j: int) -> int:
        return self.table[i][j]

    def inverse(self, i: int) -> int:
        return next(j for j in range(self.order) if self.table[i][j] == 0)

    def element_order(self, i: int) -> int:
        k, x = 1, i
        while x != 0:
            x = self.table[x][i]
            k += 1
        return k

    def involutions(self) -> list[int]:
        return [i for i in range(1, self.order) if self.table[i][i] == 0]

    def elements_of_order(self, s: int) -> list[int]:
        return [i for i in range(self.order) if self.element_order(i) == s]

    def first_klein_pair(self) -> tuple[int, int] | None:
        """Lexicographically first commuting pair of distinct involutions."""
        invs = self.involutions()
        for u, v in itertools.combinations(invs, 2):
            if self.table[u][v] == self.table[v][u]:
                return (u, v)
        return None

    # -- constructors ------------------------------------------------------
    @staticmethod
    def cyclic(m: int) -> "TwoGroup":
        if m < 1 or (m & (m - 1)):
            raise DomainError("cyclic 2-group order must be a power of 2")
        table = [[(i + j) % m for j in range(m)] for i in range(m)]
        return TwoGroup(table, label=f"C{m}")

    @staticmethod
    def direct_product(g: "TwoGroup", h: "TwoGroup") -> "TwoGroup":
        a, b = g.order, h.order
        table = [[0] * (a * b) for _ in range(a * b)]
        for i1 in range(a):
            for j1 in range(b):
                for i2 in range(a):
                    for j2 in range(b):
                        table[i1 * b + j1][i2 * b + j2] = g.mul(i1, i2) * b + h.mul(j1, j2)
        return TwoGroup(table, label=f"{g.label}x{h.label}")

    def __repr__(self):
        return f"TwoGroup({self.label}, order {self.order})"


_CYC_RE = re.compile(r"^C(\d+)$")


def parse_two_group(text: str) -> TwoGroup:
    """CLI grammar: direct products of cyclic 2-groups, e.g. C2, C4, C2xC2."""
    parts = text.strip().split("x")
    groups = []
    for part in parts:
        m = _CYC_RE.match(part)
        if not m:
            raise DomainError("cannot parse 2-group %r" % text)
        groups.append(TwoGroup.cyclic(int(m.group(1))))
    out = groups[0]
    for g in groups[1:]:
        out = TwoGroup.direct_product(out, g)
    return out


def regular_representation(g: TwoGroup, field=None) -> dict[int, Matrix]:
    """Left-regular permutation matrices: rho(u) e_h = e_{uh} (column action)."""
    from .gf import make_field
    f = field if field is not None else make_field(2, 1)
    a = g.order
    images = {}
    for u in range(a):
        rows = [[0] * a for _ in range(a)]
        for h in range(a):
            rows[g.mul(u, h)][h] = 1
        images[u] = Matrix.from_rows(f, rows)
    return images


@dataclass(frozen=True)
class Decomposition:
    n: int
    a: int
    k: int
    s: int

    def __post_init__(self):
        if self.n != self.k * self.a + self.s:
            raise DomainError("decomposition does not sum to n")


def almost_free_decompose(n: int, a: int) -> Decomposition:
    """The unique (k, s) with n = k a + s, k even >= 2, 2 <= s < 2a + 2."""
    if n < 2 * a + 2:
        raise RankTooSmallError(
            "dimension %d cannot host an almost-free copy of a group of order %d "
            "(needs n >= %d)" % (n, a, 2 * a + 2))
    k = (n - 2) // a
    if k % 2:
        k -= 1
    s = n - k * a
    assert k >= 2 and k % 2 == 0 and 2 <= s < 2 * a + 2
    return Decomposition(n, a, k, s)


def _fallback_decompose(n: int, a: int) -> Decomposition:
    """Largest k (any parity) with s = n - ka >= 2; used below the
    even-k threshold where the module is R^k (+) I with k possibly odd."""
    k = (n - 2) // a
    s = n - k * a
    if k < 1:
        raise RankTooSmallError(
            "dimension %d cannot host any free copy of a group of order %d plus "
            "a trivial 2-space" % (n, a))
    return Decomposition(n, a, k, s)


@dataclass(frozen=True)
class Embedding:
    group: TwoGroup
    target: GroupAtlas
    decomposition: Decomposition
    images: tuple[Matrix, ...]  # indexed by group element

    def image(self, u: int) -> Matrix:
        return self.images[u]

    def involution_image(self) -> Matrix:
        invs = self.group.involutions()
        if not invs:
            raise DomainError("group has no involution")
        return self.images[invs[0]]

    def order4_image(self) -> Matrix:
        elems = self.group.elements_of_order(4)
        if not elems:
            raise DomainError("group has no element of order 4")
        return self.images[elems[0]]

    def fixed_space_dimension(self) -> int:
        from .matrix import stack_rows
        f = self.target.form.field
        n = self.decomposition.n
        diffs = [self.images[u].sub(Matrix.identity(f, n)) for u in range(1, self.group.order)]
        if not diffs:
            return n
        return n - stack_rows(f, diffs).rank


def _self_dual_block(g: TwoGroup, field) -> dict[int, Matrix]:
    """The regular module with an invariant symplectic structure, expressed
    in hyperbolic coordinates (characteristic 2 only).

    B(e_g, e_h) = [g^{-1}h = z] for an involution z is an invariant
    nonsingular alternating form; conjugating by a hyperbolic basis S of
    that form moves rho into the standard block pairing."""
    if field.p != 2:
        raise UnsupportedFamilyError(
            "self-dual regular copy requires characteristic 2")
    invs = g.involutions()
    if not invs:
        raise DomainError("nontrivial 2-group without involution (impossible)")
    z = invs[0]
    a = g.order
    gram = [[0] * a for _ in range(a)]
    for x in range(a):
        for y in range(a):
            if g.mul(g.inverse(x), y) == z:
                gram[x][y] = 1
    gram_m = Matrix.from_rows(field, gram)
    s = symplectic_basis(gram_m)
    s_inv = s.inverse()
    reg = regular_representation(g, field)
    return {u: s_inv.mul(reg[u]).mul(s) for u in range(a)}


def embed_almost_free(g: TwoGroup, target) -> Embedding:
    """Embed g into the target classical group with almost-free module
    structure; raises RankTooSmallError when the dimension cannot host it."""
    if g.order < 2:
        raise DomainError("the embedded group must be nontrivial")
    target = make_atlas(target)
    spec = target.spec
    if spec.family in ("SO", "Omega"):
        raise UnsupportedFamilyError(
            "almost-free images are only placed in the full isometry/special "
            "linear covers (GL, SL, Sp, GU, SU, O)")
    space = target.form
    n, a = spec.n, g.order
    f = space.field
    if n >= 2 * a + 2:
        dec = almost_free_decompose(n, a)
    else:
        dec = _fallback_decompose(n, a)
        if dec.k % 2:
            unpaired_ok = space.kind == "zero" or (
                space.kind == "symplectic" and space.field.p == 2)
            if not unpaired_ok:
                raise RankTooSmallError(
                    "dimension %d needs an unpaired regular copy, which this "
                    "form kind does not support" % n)
    k, s = dec.k, dec.s
    pairs = space.hyperbolic_pairs()
    n_pairs_needed = (k // 2) * a + (a // 2 if k % 2 else 0)
    if space.kind != "zero" and n_pairs_needed > len(pairs):
        raise RankTooSmallError("not enough hyperbolic pairs for the free part")

    sigma = space.sigma_power
    reg = regular_representation(g, f)
    self_dual = _self_dual_block(g, f) if (k % 2 and space.kind == "symplectic") else None

    images = []
    for u in range(a):
        rows = [[int(i == j) for j in range(n)] for i in range(n)]
        rho = reg[u]
        rho_partner = rho.inverse().conj_transpose(sigma) if sigma else rho.inverse().transpose()

        def _place(block: Matrix, coords: list[int]):
            # off-block entries stay zero: rows starts as the identity
            for bi, i in enumerate(coords):
                for bj, j in enumerate(coords):
                    rows[i][j] = block.rows[bi][bj]

        pair_cursor = 0
        if space.kind == "zero":
            # no form constraint: pack the k regular copies on leading coords
            for copy in range(k):
                coords = list(range(copy * a, (copy + 1) * a))
                _place(rho, coords)
        else:
            for copy in range(k // 2):
                left = [pairs[pair_cursor + t][0] for t in range(a)]
                right = [pairs[pair_cursor + t][1] for t in range(a)]
                pair_cursor += a
                _place(rho, left)
                _place(rho_partner, right)
            if k % 2:
                half = a // 2
                left = [pairs[pair_cursor + t][0] for t in range(half)]
                right = [pairs[pair_cursor + t][1] for t in range(half)]
                pair_cursor += half
                _place(self_dual[u], left + right)
        images.append(Matrix.from_rows(f, rows))

    emb = Embedding(g, target, dec, tuple(images))
    _validate_embedding(emb)
    return emb


def _validate_embedding(emb: Embedding) -> None:
    from .forms import preserves_form
    from . import nplin
    g, images = emb.group, emb.images
    target = emb.target
    a = g.order
    field = target.form.field
    if len({m.rows for m in images}) != a:
        raise DomainError("embedding is not injective")
    use_batch = nplin.supported(field)
    if use_batch:
        if not nplin.verify_homomorphism(list(images), g.table, field):
            raise DomainError("images do not form a homomorphism")
        if not nplin.verify_form_preservation(list(images), target.form.gram,
                                              target.form.sigma_power, field):
            raise DomainError("image does not preserve the target form")
        if target.form.kind == "quadratic":
            for u in range(a):
                if not preserves_form(images[u], target.form):
                    raise DomainError("image does not preserve the quadratic part")
    else:
        for u in range(a):
            for v in range(a):
                if images[u].mul(images[v]).rows != images[g.mul(u, v)].rows:
                    raise DomainError("images do not form a homomorphism")
        for u in range(a):
            if not preserves_form(images[u], target.form):
                raise DomainError("image does not preserve the target form")
    if target.spec.family in ("SL", "SU"):
        for u in range(a):
            if images[u].det() != 1:
                raise DomainError("image violates the determinant condition")
    want = emb.decomposition.k + emb.decomposition.s
    got = emb.fixed_space_dimension()
    if got != want:
        raise DomainError("fixed space has dimension %d, expected k+s = %d" % (got, want))


def klein_subgroup(emb: Embedding) -> tuple[Matrix, Matrix]:
    """Images of the first Klein four-subgroup of the abstract group."""
    pair = emb.group.first_klein_pair()
    if pair is None:
        raise DomainError("embedded group has no Klein four-subgroup")
    return emb.images[pair[0]], emb.images[pair[1]]
