"""Classical group descriptors: order formulas, standard generators and
the GroupAtlas bundle (form + generators + exact order + BSGS handle).

Generator schemes (each validated against the closed-form order by
Schreier-Sims in the test suite, which is the contract):

  SL/GL    elementary transvections I + lambda*E_01 (lambda = 1 and a field
           generator), a signed basis cycle of determinant 1, for GL also a
           primitive-element torus; n = 2 additionally takes the lower
           transvections.
  Sp       symplectic transvections T_v(c): x -> x + c*B(x,v)*v at v = e_0
           (and a cross-pair vector when the Witt index exceeds 1), plus a
           signed rotation of the hyperbolic pairs.
  GU/SU    unitary transvections x -> x + c*B(x,v)*v at isotropic v with
           trace-zero c, a pair rotation and the e_0 <-> f_0 flip, a
           norm-compensating torus (GU) or its determinant-1 cousin (SU),
           and a norm-one pseudo-reflection on the anisotropic tail for
           odd n.
  O(eps)   x -> x - Q(v)^{-1} B(x,v) v over nonsingular v (orthogonal
           transvections in even characteristic, reflections in odd);
           vectors run over a spanning pool of nonsingular vectors.

SO and Omega carry order formulas but no generator scheme here; their
members enter computations as catalog data.
"""

from __future__ import annotations

import random
import re
import threading
from dataclasses import dataclass
from functools import cached_property

from . import bsgs
from .errors import DomainError, UnsupportedFamilyError
from .forms import FormedSpace, formed_space, preserves_form
from .matrix import Matrix

FAMILIES = ("GL", "SL", "Sp", "GU", "SU", "O", "SO", "Omega")


@dataclass(frozen=True)
class GroupSpec:
    family: str
    n: int
    q: int
    eps: int | None = None  # +1 | -1 for even orthogonal, 0 for odd, None otherwise

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise UnsupportedFamilyError("unknown family %r" % self.family)
        if self.n < 1:
            raise DomainError("dimension must be positive")
        if self.family == "Sp":
            if self.n % 2:
                raise DomainError("Sp needs even dimension")
        if self.family in ("O", "SO", "Omega"):
            if self.n % 2 == 0:
                if self.eps not in (1, -1):
                    raise DomainError("even orthogonal dimension needs eps +1 or -1")
            else:
                if self.eps not in (None, 0):
                    raise DomainError("odd orthogonal dimension carries no +/- type")
                object.__setattr__(self, "eps", 0)
        elif self.eps is not None:
            raise DomainError("eps only applies to orthogonal families")

    @property
    def delta(self) -> int:
        return 2 if self.family in ("GU", "SU") else 1

    def label(self) -> str:
        fam = self.family
        if self.family in ("O", "SO", "Omega") and self.n % 2 == 0:
            fam += "+" if self.eps == 1 else "-"
        return f"{fam}_{self.n}_{self.q}"

    def __str__(self):
        return self.label()


_GROUP_RE = re.compile(r"^(GL|SL|Sp|GU|SU|Omega|SO|O)([+-]?)_(\d+)_(\d+)$")


def parse_group(label: str) -> GroupSpec:
    """FAMILY[EPS]_N_Q, e.g. Sp_6_2, O+_8_2, SU_4_2."""
    m = _GROUP_RE.match(label.strip())
    if not m:
        raise DomainError("cannot parse group label %r" % label)
    fam, eps_s, n_s, q_s = m.groups()
    eps = {"+": 1, "-": -1, "": None}[eps_s]
    if eps is not None and fam not in ("O", "SO", "Omega"):
        raise DomainError("eps marker only valid for orthogonal families")
    return GroupSpec(fam, int(n_s), int(q_s), eps)


# -- orders ----------------------------------------------------------------

def group_order(spec: GroupSpec) -> int:
    """Exact order by the classical product formulas."""
    n, q = spec.n, spec.q
    fam = spec.family
    if fam == "GL":
        out = 1
        for i in range(n):
            out *= q**n - q**i
        return out
    if fam == "SL":
        return group_order(GroupSpec("GL", n, q)) // (q - 1)
    if fam == "Sp":
        m = n // 2
        out = q**(m * m)
        for i in range(1, m + 1):
            out *= q**(2 * i) - 1
        return out
    if fam == "GU":
        out = q**(n * (n - 1) // 2)
        for i in range(1, n + 1):
            out *= q**i - (-1)**i
        return out
    if fam == "SU":
        return group_order(GroupSpec("GU", n, q)) // (q + 1)
    if fam in ("O", "SO", "Omega"):
        if n % 2 == 0:
            m = n // 2
            o = 2 * q**(m * (m - 1)) * (q**m - spec.eps)
            for i in range(1, m):
                o *= q**(2 * i) - 1
        else:
            if q % 2 == 0:
                raise UnsupportedFamilyError(
                    "odd-dimensional orthogonal groups in characteristic 2 are degenerate")
            m = (n - 1) // 2
            o = 2 * q**(m * m)
            for i in range(1, m + 1):
                o *= q**(2 * i) - 1
        if fam == "O":
            return o
        if fam == "SO":
            return o if q % 2 == 0 else o // 2
        # Omega: index 2 in O for q even, index 4 (even n) / 4 (odd n >= 3) for q odd
        if q % 2 == 0:
            return o // 2
        return o // 4
    raise UnsupportedFamilyError(fam)


# -- generator schemes -------------------------------------------------------

def _primitive_code(field) -> int:
    for a in range(2, field.q):
        x, order = a, 1
        while x != 1:
            x = field.mul(x, a)
            order += 1
        if order == field.q - 1:
            return a
    return 1  # GF(2)


def _field_gen_codes(field) -> list[int]:
    """Multipliers whose ring span is the whole field: 1, plus x for e > 1."""
    return [1] if field.e == 1 else [1, field.p]


def _transvection(space: FormedSpace, v: tuple[int, ...], c: int) -> Matrix:
    """x -> x + c*B(x,v)*v as a matrix (column action)."""
    f = space.field
    n = space.n
    # B(e_j, v) is the j-th entry of gram @ v^sigma
    vs = tuple(space.conj(x) for x in v) if space.delta == 2 else v
    bvals = space.gram.apply(vs)
    rows = [[int(i == j) for j in range(n)] for i in range(n)]
    for j, b in enumerate(bvals):
        if b:
            cb = f.mul(c, b)
            for i in range(n):
                if v[i]:
                    rows[i][j] = f.add(rows[i][j], f.mul(cb, v[i]))
    return Matrix.from_rows(f, rows)


def _sl_generators(spec: GroupSpec) -> list[Matrix]:
    from .gf import make_field, field_of_size
    f = field_of_size(spec.q)
    f = make_field(f.p, f.e)
    n = spec.n
    if n == 1:
        return []
    gens = []
    for lam in _field_gen_codes(f):
        t = [[int(i == j) for j in range(n)] for i in range(n)]
        t[0][1] = lam
        gens.append(Matrix.from_rows(f, t))
        if n == 2:
            t = [[int(i == j) for j in range(n)] for i in range(n)]
            t[1][0] = lam
            gens.append(Matrix.from_rows(f, t))
    if n >= 2:
        cyc = [[0] * n for _ in range(n)]
        for i in range(n - 1):
            cyc[i + 1][i] = 1
        cyc[0][n - 1] = 1 if n % 2 else f.neg(1)
        gens.append(Matrix.from_rows(f, cyc))
    return gens


def _sp_generators(spec: GroupSpec, space: FormedSpace) -> list[Matrix]:
    f = space.field
    n, h = spec.n, spec.n // 2
    if h == 1:
        return _sl_generators(GroupSpec("SL", 2, spec.q))
    gens = []
    e0 = tuple(int(i == 0) for i in range(n))
    for lam in _field_gen_codes(f):
        gens.append(_transvection(space, e0, lam))
    mix = tuple(int(i in (0, 1)) for i in range(n))  # e_0 + e_1
    gens.append(_transvection(space, mix, 1))
    mix2 = tuple(int(i in (0, h + 1)) for i in range(n))  # e_0 + f_1
    gens.append(_transvection(space, mix2, 1))
    rot = [[0] * n for _ in range(n)]
    for i in range(h - 1):
        rot[i + 1][i] = 1
        rot[h + i + 1][h + i] = 1
    rot[h][h - 1] = 1             # e_{h-1} -> f_0
    rot[0][n - 1] = f.neg(1)      # f_{h-1} -> -e_0
    gens.append(Matrix.from_rows(f, rot))
    return gens


def _pseudo_reflection(space: FormedSpace, v: tuple[int, ...], mu: int) -> Matrix:
    """x -> x + (mu - 1) B(x,v)/B(v,v) v; norm-one mu keeps a hermitian form."""
    f = space.field
    n = space.n
    c = f.mul(f.sub(mu, 1), f.inv(space.pair(v, v)))
    return _transvection(space, v, c)


def _support_pool(space: FormedSpace, max_support: int):
    from itertools import combinations, product
    f = space.field
    n = space.n
    for size in range(1, max_support + 1):
        for sup in combinations(range(n), size):
            for coeffs in product(range(1, f.q), repeat=size - 1):
                v = [0] * n
                v[sup[0]] = 1
                for pos, c in zip(sup[1:], coeffs):
                    v[pos] = c
                yield tuple(v)


def _unitary_generators(spec: GroupSpec, space: FormedSpace) -> list[Matrix]:
    """GU: unitary reflections at nonisotropic vectors, transvections at
    isotropic ones (support <= 3), plus a primitive torus on the first pair.
    SU: the same pool with each element's determinant cancelled by a torus
    power, plus torus^(q+1); this generates all of SU because the corrected
    pool H satisfies H<torus> = GU and torus^(q+1) in H forces
    |H| >= |GU|/(q+1) = |SU|."""
    f = space.field
    n, h = spec.n, spec.n // 2
    if h == 0:
        raise UnsupportedFamilyError("unitary groups need dimension >= 2")
    q = space.base_q
    mu = _primitive_code(f)
    nu = f.pow(mu, q - 1)  # norm-one element of order q+1
    lam0 = next(c for c in f.elements() if c and f.add(c, f.pow(c, q)) == 0)
    pool = []
    for v in _support_pool(space, 3):
        if space.pair(v, v) != 0:
            pool.append(_pseudo_reflection(space, v, nu))
        else:
            pool.append(_transvection(space, v, lam0))
    torus = [[int(i == j) for j in range(n)] for i in range(n)]
    torus[0][0] = mu
    torus[h][h] = f.inv(f.pow(mu, q))
    t0 = Matrix.from_rows(f, torus)
    pool.append(t0)
    if spec.family == "GU":
        return pool
    # SU: cancel determinants against det(t0), which generates det(GU) = C_{q+1}
    dlog = {}
    x = 1
    dt = t0.det()
    for k in range(q + 1):
        dlog[x] = k
        x = f.mul(x, dt)
    t0_inv = t0.inverse()
    su_pool = []
    for g in pool:
        s = dlog[g.det()]
        m = g
        for _ in range(s):
            m = m.mul(t0_inv)
        su_pool.append(m)
    su_pool.append(t0.pow(q + 1))
    return su_pool


def _nonsingular_pool(space: FormedSpace, cap: int = 4096) -> list[tuple[int, ...]]:
    """Nonsingular vectors normalized to leading coefficient 1.

    Exhaustive while q^n stays under the cap; beyond that, vectors of
    support <= 3 (still a spanning pool of reflections/transvections).
    """
    from itertools import combinations, product
    f = space.field
    n = space.n
    vecs = []
    if f.q**n <= cap:
        for v in product(range(f.q), repeat=n):
            if any(v) and space.quad_value(v) != 0:
                if next(x for x in v if x) == 1:
                    vecs.append(v)
    else:
        for support_size in (1, 2, 3):
            for support in combinations(range(n), support_size):
                for coeffs in product(range(1, f.q), repeat=support_size - 1):
                    v = [0] * n
                    v[support[0]] = 1
                    for pos, c in zip(support[1:], coeffs):
                        v[pos] = c
                    if space.quad_value(tuple(v)) != 0:
                        vecs.append(tuple(v))
    return vecs


def _orthogonal_generators(spec: GroupSpec, space: FormedSpace) -> list[Matrix]:
    """Reflections x -> x - Q(v)^{-1} B(x,v) v over nonsingular v, plus the
    hyperbolic pair flips and adjacent pair swaps (reflections alone fall
    short of small even-characteristic groups such as O+_4(2))."""
    f = space.field
    n, h = spec.n, space.witt_index
    gens = []
    for v in _nonsingular_pool(space):
        c = f.inv(space.quad_value(v))
        gens.append(_transvection(space, v, f.neg(c)))
    for i in range(h):
        m = [[int(a == b) for b in range(n)] for a in range(n)]
        m[i][i] = m[h + i][h + i] = 0
        m[i][h + i] = m[h + i][i] = 1
        gens.append(Matrix.from_rows(f, m))
    for i in range(h - 1):
        m = [[int(a == b) for b in range(n)] for a in range(n)]
        for a, b in ((i, i + 1), (h + i, h + i + 1)):
            m[a][a] = m[b][b] = 0
            m[a][b] = m[b][a] = 1
        gens.append(Matrix.from_rows(f, m))
    return gens


def standard_form(spec: GroupSpec) -> FormedSpace:
    """The canonical formed space the family preserves."""
    fam = spec.family
    if fam in ("GL", "SL"):
        return formed_space(spec.n, "zero", spec.q)
    if fam == "Sp":
        return formed_space(spec.n, "symplectic", spec.q)
    if fam in ("GU", "SU"):
        return formed_space(spec.n, "unitary", spec.q)
    return formed_space(spec.n, "quadratic", spec.q, spec.eps)


def standard_generators(spec: GroupSpec) -> list[Matrix]:
    """A generating set for the matrix group; closure order is asserted
    against group_order by BSGS wherever the test suite touches a spec."""
    space = standard_form(spec)
    fam = spec.family
    if fam == "SL":
        return _sl_generators(spec)
    if fam == "GL":
        from .gf import field_of_size
        f = space.field
        gens = _sl_generators(GroupSpec("SL", spec.n, spec.q))
        if spec.q > 2:
            torus = [[int(i == j) for j in range(spec.n)] for i in range(spec.n)]
            torus[0][0] = _primitive_code(f)
            gens.append(Matrix.from_rows(f, torus))
        return gens or [Matrix.identity(f, spec.n)]
    if fam == "Sp":
        return _sp_generators(spec, space)
    if fam in ("GU", "SU"):
        return _unitary_generators(spec, space)
    if fam == "O":
        return _orthogonal_generators(spec, space)
    raise UnsupportedFamilyError(
        "no generator scheme for %s; supply members as catalog data" % fam)


# -- the atlas ---------------------------------------------------------------

class GroupAtlas:
    """Form + generators + exact order + permutation-action handle.

    Internal BSGS state is built once on first use behind a lock; all
    queries afterwards are read-only.
    """

    def __init__(self, spec: GroupSpec, generators: list[Matrix] | None = None):
        self.spec = spec
        self.form = standard_form(spec)
        self._generators = list(generators) if generators is not None else None
        self._lock = threading.RLock()
        self._bsgs_order: int | None = None
        if self._generators is not None:
            self._check_generators(self._generators)

    def _check_generators(self, gens: list[Matrix]) -> None:
        for g in gens:
            if not preserves_form(g, self.form):
                raise DomainError("generator does not preserve the standard form")
            if self.spec.family in ("SL", "SU") and g.det() != 1:
                raise DomainError("generator violates the determinant-1 condition")

    @property
    def generators(self) -> list[Matrix]:
        with self._lock:
            if self._generators is None:
                gens = standard_generators(self.spec)
                self._check_generators(gens)
                self._generators = gens
            return self._generators

    @cached_property
    def order(self) -> int:
        return group_order(self.spec)

    @property
    def degree(self) -> int:
        return self.form.field.q**self.spec.n - 1

    def bsgs_order(self) -> int:
        with self._lock:
            if self._bsgs_order is None:
                self._bsgs_order = bsgs.bsgs_order(self.generators)
            return self._bsgs_order

    def generator_perms(self):
        return [bsgs.matrix_to_perm(g) for g in self.generators]

    def identity(self) -> Matrix:
        return Matrix.identity(self.form.field, self.spec.n)

    def random_element(self, rng: random.Random, walk_length: int = 50) -> Matrix:
        """Product-replacement walk of configurable length; caller owns rng."""
        gens = self.generators
        if not gens:
            return self.identity()
        slots = list(gens)
        while len(slots) < 8:
            slots.extend(gens)
        acc = self.identity()
        for _ in range(walk_length):
            i = rng.randrange(len(slots))
            j = rng.randrange(len(slots))
            if i == j:
                continue
            other = slots[j] if rng.getrandbits(1) else slots[j].inverse()
            slots[i] = slots[i].mul(other)
            acc = acc.mul(slots[i])
        return acc

    def label(self) -> str:
        return self.spec.label()


def atlas(spec_or_label) -> GroupAtlas:
    if isinstance(spec_or_label, GroupAtlas):
        return spec_or_label
    if isinstance(spec_or_label, str):
        return GroupAtlas(parse_group(spec_or_label))
    return GroupAtlas(spec_or_label)
