"""Totally singular subspace enumeration, fixed-point counts on them,
conjugacy classes by orbit closure, and exact verification of the
fixed-point-ratio double-counting identities.

Subspaces are canonicalized as reduced row echelon bases.  Enumeration
recurses over pivot patterns and rows, solving the linear constraints
(echelon shape plus orthogonality to the rows already chosen) before
filtering the quadratic/hermitian condition, so only singular prefixes
are ever extended; the stream is exhaustive and duplicate-free because
every subspace has exactly one echelon basis.

The identity checked by fpr_check,

    fix(x, Omega) * |x^G| = |Omega| * |x^G  intersect  Stab(omega_0)|

holds exactly on each G-orbit Omega of totally singular m-spaces (it is
double counting of {(omega, s) : s in x^G, omega s = omega}); any
violation is an implementation bug and raises.  The subgroup variant
replaces the class of x by the conjugation orbit of a Klein subgroup.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .errors import CapExceededError, DomainError
from .forms import FormedSpace
from .groups import GroupAtlas
from .matrix import Matrix

SUBSPACE_CAP = 10**6
ORBIT_CAP = 10**6


# ---------------------------------------------------------------------------
# canonical subspace bases
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SubspaceBasis:
    m: int
    rows: tuple[tuple[int, ...], ...]  # reduced echelon, m x n

    @property
    def key(self) -> tuple:
        return self.rows


def echelonize(space_field, rows) -> tuple[tuple[int, ...], ...]:
    m = Matrix.from_rows(space_field, rows)
    red, pivots = m.rref()
    return red.rows[:len(pivots)]


def _solve_affine(field, eqs: list[list[int]], n: int):
    """Solutions of linear systems given as rows [a_0..a_{n-1}, b] over the
    field; returns (particular, basis) in coordinate space or None if
    inconsistent.  Plain-list Gaussian elimination (hot path)."""
    rows = [list(e) for e in eqs]
    add, sub, mul, inv = field.add, field.sub, field.mul, field.inv
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        scale = inv(rows[r][c])
        if scale != 1:
            rows[r] = [mul(scale, x) for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                factor = rows[i][c]
                rows[i] = [sub(x, mul(factor, y)) for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    for i in range(r, len(rows)):
        if rows[i][n]:
            return None  # 0 = nonzero: inconsistent
    part = [0] * n
    for t, pc in enumerate(pivots):
        part[pc] = rows[t][n]
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fc in free:
        v = [0] * n
        v[fc] = 1
        for t, pc in enumerate(pivots):
            v[pc] = field.neg(rows[t][fc])
        basis.append(tuple(v))
    return tuple(part), tuple(basis)


def _compiled_singular_test(space: FormedSpace):
    """Closure computing 'is this vector singular' through per-entry tables
    of the sparse gram/quad data (hot path of the enumeration)."""
    f = space.field
    q = f.q
    add = f.add
    n = space.n
    terms = []  # (i, j, table[q*q]) contributing table[v_i * q + v_j]
    if space.kind == "quadratic":
        src = space.quad.rows
        for i in range(n):
            for j in range(i, n):
                if src[i][j]:
                    g = src[i][j]
                    tab = [f.mul(a, f.mul(g, b)) for a in range(q) for b in range(q)]
                    terms.append((i, j, tab))
    else:
        gram = space.gram.rows
        conj = space.conj
        for i in range(n):
            if gram[i][i]:
                tab = [f.mul(a, f.mul(gram[i][i], conj(b))) for a in range(q) for b in range(q)]
                terms.append((i, i, tab))
            for j in range(i + 1, n):
                if gram[i][j] or gram[j][i]:
                    tab = [
                        add(f.mul(a, f.mul(gram[i][j], conj(b))),
                            f.mul(b, f.mul(gram[j][i], conj(a))))
                        for a in range(q) for b in range(q)
                    ]
                    terms.append((i, j, tab))

    def is_singular(v) -> bool:
        acc = 0
        for i, j, tab in terms:
            vi = v[i]
            if vi or v[j]:
                acc = add(acc, tab[vi * q + v[j]])
        return acc == 0

    return is_singular


def enumerate_totally_singular(space: FormedSpace, m: int, cap: int = SUBSPACE_CAP):
    """Yield every totally singular m-subspace once, as SubspaceBasis, in
    (pivot pattern, row values) lexicographic order."""
    n = space.n
    f = space.field
    if m < 0:
        raise DomainError("negative dimension")
    if m == 0:
        yield SubspaceBasis(0, ())
        return
    max_m = n if space.kind == "zero" else n // 2
    if m > max_m:
        raise DomainError("m = %d out of range" % m)
    count = 0
    singular_needed = space.kind != "zero"
    is_singular = _compiled_singular_test(space) if singular_needed else None
    add, mul = f.add, f.mul

    def row_pair_coeffs(u):
        """B(u, .) as linear coefficients in v (conjugated for unitary)."""
        coeffs = []
        for j in range(n):
            acc = 0
            for i, ui in enumerate(u):
                if ui and space.gram.rows[i][j]:
                    acc = add(acc, mul(ui, space.gram.rows[i][j]))
            coeffs.append(acc)
        if space.delta == 2:
            coeffs = [space.conj(cf) for cf in coeffs]
        return coeffs

    for pattern in itertools.combinations(range(n), m):
        pattern_set = set(pattern)

        def extend(rows: list[tuple[int, ...]], depth: int):
            nonlocal count
            if depth == m:
                count += 1
                if count > cap:
                    raise CapExceededError("subspace stream exceeds cap %d" % cap)
                yield SubspaceBasis(m, tuple(rows))
                return
            p = pattern[depth]
            # echelon shape pins v[j] = 0 for j < p, v[p] = 1, v[later pivot] = 0;
            # the remaining unknowns are the non-pivot coordinates past p
            free_coords = [j for j in range(p + 1, n) if j not in pattern_set]
            d = len(free_coords)
            eqs = []
            if singular_needed:
                for u in rows:
                    coeffs = row_pair_coeffs(u)
                    eq = [coeffs[j] for j in free_coords]
                    eq.append(f.neg(coeffs[p]))  # constant moved across
                    eqs.append(eq)
            sol = _solve_affine(f, eqs, d)
            if sol is None:
                return
            part, basis = sol
            for combo in itertools.product(range(f.q), repeat=len(basis)):
                vals = list(part)
                for coef, vec in zip(combo, basis):
                    if coef:
                        for idx, x in enumerate(vec):
                            if x:
                                vals[idx] = add(vals[idx], mul(coef, x))
                v = [0] * n
                v[p] = 1
                for idx, j in enumerate(free_coords):
                    v[j] = vals[idx]
                v = tuple(v)
                if singular_needed and not is_singular(v):
                    continue
                rows.append(v)
                yield from extend(rows, depth + 1)
                rows.pop()

        yield from extend([], 0)


def act_on_subspace(basis: SubspaceBasis, g: Matrix, field) -> SubspaceBasis:
    """Image of the subspace under the column action v -> g v."""
    moved = [g.apply(r) for r in basis.rows]
    return SubspaceBasis(basis.m, echelonize(field, moved))


def fix_count(elements: list[Matrix], space: FormedSpace, m: int,
              cap: int = SUBSPACE_CAP, omega=None) -> int:
    """Totally singular m-spaces invariant under every listed element."""
    total = 0
    stream = omega if omega is not None else enumerate_totally_singular(space, m, cap)
    for basis in stream:
        if all(act_on_subspace(basis, g, space.field).rows == basis.rows
               for g in elements):
            total += 1
    return total


# ---------------------------------------------------------------------------
# conjugation orbits
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ClassData:
    representative: Matrix
    size: int
    orbit: frozenset  # canonical row tuples

    def members(self):
        return self.orbit


def class_size(x: Matrix, atlas: GroupAtlas, cap: int = ORBIT_CAP) -> ClassData:
    """Exact |x^G| by breadth-first conjugation closure under the generators."""
    gens = [(g, g.inverse()) for g in atlas.generators]
    seen = {x.rows}
    queue = [x]
    reps = {x.rows: x}
    while queue:
        cur = queue.pop()
        for g, ginv in gens:
            conj = ginv.mul(cur).mul(g)
            if conj.rows not in seen:
                seen.add(conj.rows)
                reps[conj.rows] = conj
                queue.append(conj)
                if len(seen) > cap:
                    raise CapExceededError("conjugacy orbit exceeds cap %d" % cap)
    return ClassData(x, len(seen), frozenset(seen))


def class_intersection(cd: ClassData, predicate) -> int:
    """Orbit members satisfying a predicate on matrices."""
    spec = cd.representative.spec
    return sum(1 for rows in cd.orbit if predicate(Matrix(spec, rows)))


def subgroup_class_size(pair: tuple[Matrix, Matrix], atlas: GroupAtlas,
                        cap: int = ORBIT_CAP):
    """Conjugation orbit of a Klein subgroup, keyed by its involution set."""
    y1, y2 = pair
    y3 = y1.mul(y2)
    gens = [(g, g.inverse()) for g in atlas.generators]

    def canon(a, b, c):
        return frozenset((a.rows, b.rows, c.rows))

    start = canon(y1, y2, y3)
    seen = {start}
    queue = [(y1, y2, y3)]
    members = [start]
    while queue:
        a, b, c = queue.pop()
        for g, ginv in gens:
            ta, tb, tc = (ginv.mul(a).mul(g), ginv.mul(b).mul(g), ginv.mul(c).mul(g))
            key = canon(ta, tb, tc)
            if key not in seen:
                seen.add(key)
                members.append(key)
                queue.append((ta, tb, tc))
                if len(seen) > cap:
                    raise CapExceededError("subgroup orbit exceeds cap %d" % cap)
    return members


# ---------------------------------------------------------------------------
# the double-counting identity
# ---------------------------------------------------------------------------

def standard_singular_space(space: FormedSpace, m: int) -> SubspaceBasis:
    """Span of the first m hyperbolic basis vectors (always totally singular)."""
    if m < 0 or m > space.n:
        raise DomainError("m = %d out of range" % m)
    if space.kind != "zero" and m > space.witt_index:
        raise DomainError("no totally singular %d-space in this form" % m)
    n = space.n
    rows = tuple(tuple(int(j == i) for j in range(n)) for i in range(m))
    return SubspaceBasis(m, rows)


def subspace_orbit(atlas: GroupAtlas, start: SubspaceBasis, cap: int = SUBSPACE_CAP):
    """G-orbit of a subspace under the generators (canonical bases)."""
    f = atlas.form.field
    gens = atlas.generators
    seen = {start.rows}
    queue = [start]
    out = [start]
    while queue:
        cur = queue.pop()
        for g in gens:
            nxt = act_on_subspace(cur, g, f)
            if nxt.rows not in seen:
                seen.add(nxt.rows)
                out.append(nxt)
                queue.append(nxt)
                if len(seen) > cap:
                    raise CapExceededError("subspace orbit exceeds cap %d" % cap)
    return out


@dataclass(frozen=True)
class FprReport:
    group: str
    m: int
    omega_size: int
    fix: int
    class_size: int
    intersection: int
    fpr: Fraction
    transitive: bool
    base_q: int

    def lhs(self) -> int:
        return self.fix * self.class_size

    def rhs(self) -> int:
        return self.omega_size * self.intersection

    def measured_exponent(self) -> float | None:
        """log_q of the fixed point ratio (negative for fpr < 1)."""
        import math
        if self.fpr <= 0:
            return None
        return math.log(self.fpr) / math.log(self.base_q)

    def to_json(self) -> dict:
        return {
            "group": self.group,
            "m": self.m,
            "omega_size": self.omega_size,
            "fix": self.fix,
            "class_size": self.class_size,
            "intersection": self.intersection,
            "fpr_num": self.fpr.numerator,
            "fpr_den": self.fpr.denominator,
            "measured_exponent": self.measured_exponent(),
            "transitive": self.transitive,
        }


def _stabilizes(basis: SubspaceBasis, g: Matrix, field) -> bool:
    return act_on_subspace(basis, g, field).rows == basis.rows


def fpr_check(witness, atlas: GroupAtlas, m: int,
              subspace_cap: int = SUBSPACE_CAP, orbit_cap: int = ORBIT_CAP) -> FprReport:
    """Verify fix * |class| = |Omega| * |class intersect Stab(omega_0)| exactly.

    `witness` is a single matrix (element case) or a pair of commuting
    involutions (Klein-subgroup case).  Omega is the G-orbit of the
    standard totally singular m-space, so the identity applies even when
    the full set of totally singular m-spaces splits into several orbits.
    Raises DomainError if the identity fails (it is a theorem).
    """
    space = atlas.form
    f = space.field
    omega0 = standard_singular_space(space, m)
    omega = subspace_orbit(atlas, omega0, subspace_cap)
    n_total = None
    try:
        from .census import totally_singular_count
        n_total = totally_singular_count(space, m)
    except DomainError:
        pass
    transitive = n_total is not None and len(omega) == n_total

    if isinstance(witness, Matrix):
        cd = class_size(witness, atlas, orbit_cap)
        fix = fix_count([witness], space, m, subspace_cap, omega=omega)
        inter = class_intersection(cd, lambda g: _stabilizes(omega0, g, f))
        size = cd.size
    else:
        y1, y2 = witness
        members = subgroup_class_size((y1, y2), atlas, orbit_cap)
        size = len(members)
        fix = fix_count([y1, y2], space, m, subspace_cap, omega=omega)
        spec = y1.spec
        inter = 0
        for key in members:
            mats = [Matrix(spec, rows) for rows in key]
            if all(_stabilizes(omega0, g, f) for g in mats):
                inter += 1
    lhs = fix * size
    rhs = len(omega) * inter
    if lhs != rhs:
        raise DomainError(
            "double-counting identity failed: fix*|class| = %d but |Omega|*|inter| = %d"
            % (lhs, rhs))
    return FprReport(atlas.label(), m, len(omega), fix, size,
                     inter, Fraction(inter, size), transitive, space.base_q)


# ---------------------------------------------------------------------------
# parabolic exponent reports
# ---------------------------------------------------------------------------

def _family_key(atlas: GroupAtlas) -> str:
    fam = atlas.spec.family
    if fam in ("GL", "SL"):
        return "linear"
    if fam == "Sp":
        return "symplectic"
    if fam in ("GU", "SU"):
        return "unitary"
    return "orthogonal"


def involution_fpr_exponent(atlas: GroupAtlas, m: int) -> Fraction:
    """Documented decay exponent f with fpr(x, P_m^G) < q^(-f+cm)."""
    n = atlas.spec.n
    key = _family_key(atlas)
    if key == "linear":
        return Fraction(m * (n - m), 2)
    if key in ("symplectic", "orthogonal"):
        return Fraction(m * (2 * n - 3 * m), 4)
    return Fraction(m * (2 * n - 3 * m), 2)


def order4_fix_exponent(atlas: GroupAtlas, m: int) -> Fraction:
    """Documented growth exponent f with fix(y, P_m^G) < q^(f+cm)."""
    n = atlas.spec.n
    key = _family_key(atlas)
    if key == "linear":
        return Fraction(m * (n - m), 4)
    if key in ("symplectic", "orthogonal"):
        return Fraction(m * (2 * n - 3 * m), 8)
    return Fraction(m * (2 * n - 3 * m), 4)


def klein_fix_exponent(atlas: GroupAtlas, m: int) -> Fraction:
    """Documented growth exponent f with fix(K, P_m^G) < q^(f+cm)."""
    n = atlas.spec.n
    key = _family_key(atlas)
    if key == "linear":
        return Fraction(m * (n - m), 4)
    if key in ("symplectic", "orthogonal"):
        return Fraction(m * (11 * n - 12 * m), 44)
    return Fraction(m * (11 * n - 12 * m), 22)


def product_target_exponent(atlas: GroupAtlas, m: int, mode: str) -> Fraction:
    """Documented exponent f with sum over P_m^G of the class-ratio product
    below q^(-f+cm); mode 'order4' or 'klein'."""
    n = atlas.spec.n
    key = _family_key(atlas)
    if key == "linear":
        return Fraction(m * (n - m), 4)
    if mode == "order4":
        if key in ("symplectic", "orthogonal"):
            return Fraction(m * (2 * n - 3 * m), 8)
        return Fraction(m * (2 * n - 3 * m), 4)
    if key in ("symplectic", "orthogonal"):
        return Fraction(m * (11 * n - 21 * m), 44)
    return Fraction(m * (11 * n - 21 * m), 22)


@dataclass(frozen=True)
class ParabolicBoundReport:
    group: str
    m: int
    mode: str  # order4 | klein
    fpr_x: Fraction
    fix_partner: int
    product: Fraction
    measured_exponent: float | None  # log_q(product)
    target_exponent_product: Fraction
    target_exponent_fpr_x: Fraction
    target_exponent_fix_partner: Fraction

    def to_json(self) -> dict:
        return {
            "group": self.group,
            "m": self.m,
            "mode": self.mode,
            "fpr_x_num": self.fpr_x.numerator,
            "fpr_x_den": self.fpr_x.denominator,
            "fix_partner": self.fix_partner,
            "product_num": self.product.numerator,
            "product_den": self.product.denominator,
            "measured_exponent": self.measured_exponent,
            # the stated decay target for the conjugate-expanded sum, plus the
            # per-factor tables emitted verbatim (they differ; both reported)
            "target_exponent_f": str(self.target_exponent_product),
            "target_exponent_fpr_x": str(self.target_exponent_fpr_x),
            "target_exponent_fix_partner": str(self.target_exponent_fix_partner),
        }


def parabolic_bound_report(x: Matrix, partner, atlas: GroupAtlas, m: int,
                           mode: str = "order4") -> ParabolicBoundReport:
    """Exact fpr(x, P_m^G) * fix(partner, P_m^G) with the documented target
    exponents emitted alongside; only the exact double-counting identities
    are asserted (inequalities carry unspecified constants and are
    reported, never asserted)."""
    import math
    if mode not in ("order4", "klein"):
        raise DomainError("mode must be order4 or klein")
    rep_x = fpr_check(x, atlas, m)
    partner_list = [partner] if isinstance(partner, Matrix) else list(partner)
    if mode == "klein" and len(partner_list) != 2:
        raise DomainError("klein mode takes a pair of commuting involutions")
    omega = subspace_orbit(atlas, standard_singular_space(atlas.form, m))
    fix_partner = fix_count(partner_list, atlas.form, m, omega=omega)
    product = rep_x.fpr * fix_partner
    q = atlas.form.base_q
    measured = math.log(product) / math.log(q) if product > 0 else None
    fix_target = (order4_fix_exponent(atlas, m) if mode == "order4"
                  else klein_fix_exponent(atlas, m))
    return ParabolicBoundReport(
        atlas.label(), m, mode, rep_x.fpr, fix_partner, product, measured,
        product_target_exponent(atlas, m, mode),
        involution_fpr_exponent(atlas, m), fix_target)
