"""Exact counting: elements of a given order, Klein four-subgroups,
symmetric-group counts, and closed-form matrix combinatorics over GF(q)
(rank counts, the AB=0 pair count, totally singular subspace counts,
unipotent centralizer orders, square-zero block-matrix counts), each
backed by a brute-force oracle.

Group-element enumeration keeps two backends: a vectorized one for
matrix groups over GF(2) in dimension <= 8 (rows as bitmasks inside
numpy arrays, products as table lookups) and a generic exact one.  Both
are exhaustive closures; the backends only differ in speed.

Counts with unnamed asymptotic constants in the literature are emitted
as exact integers plus a measured exponent; nothing here asserts an
inequality that depends on an unspecified constant.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import CapExceededError, DomainError
from .forms import FormedSpace
from .matrix import Matrix

ENUMERATION_CAP = 10**7
TUPLE_CAP = 10**8


# ---------------------------------------------------------------------------
# group element stores
# ---------------------------------------------------------------------------

def _rows_to_masks(m: Matrix) -> np.ndarray:
    n = m.n_cols
    return np.array([sum(r[c] << c for c in range(n)) for r in m.rows], dtype=np.uint16)


def _mask_table(gen_rows: np.ndarray, n: int) -> np.ndarray:
    """T[mask] = XOR of gen rows selected by the bits of mask."""
    table = np.zeros(1 << n, dtype=np.uint16)
    rows = [int(x) for x in gen_rows]
    for mask in range(1, 1 << n):
        low = mask & -mask
        table[mask] = table[mask ^ low] ^ rows[low.bit_length() - 1]
    return table


class _Gf2Store:
    """All elements of a GF(2) matrix group, rows-as-bitmask arrays."""

    def __init__(self, gens: list[Matrix], cap: int):
        self.n = gens[0].n_rows
        n = self.n
        if n > 8:
            raise DomainError("gf2 store supports n <= 8")
        self.shifts = np.array([1 << (n * i) for i in range(n)], dtype=np.uint64)
        tables = [_mask_table(_rows_to_masks(g), n) for g in gens]
        ident = np.array([1 << i for i in range(n)], dtype=np.uint16)
        seen = {self._code_one(ident)}
        chunks = [ident[None, :]]
        frontier = ident[None, :]
        while frontier.shape[0]:
            fresh = []
            for table in tables:
                prod = table[frontier]
                codes = prod.astype(np.uint64) @ self.shifts
                for rowvec, code in zip(prod, codes.tolist()):
                    if code not in seen:
                        seen.add(code)
                        fresh.append(rowvec)
                        if len(seen) > cap:
                            raise CapExceededError("group exceeds enumeration cap %d" % cap)
            frontier = np.array(fresh, dtype=np.uint16) if fresh else np.empty((0, n), np.uint16)
            if frontier.shape[0]:
                chunks.append(frontier)
        self.rows = np.concatenate(chunks, axis=0)
        self.ident = ident

    def _code_one(self, rows) -> int:
        return int(rows.astype(np.uint64) @ self.shifts)

    @property
    def size(self) -> int:
        return self.rows.shape[0]

    # -- batch algebra ---------------------------------------------------
    def _bmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        out = np.zeros_like(a)
        for c in range(self.n):
            bit = (a >> c) & 1
            out ^= bit * b[:, c:c + 1]
        return out

    def _bpow(self, exp: int) -> np.ndarray:
        result = np.broadcast_to(self.ident, self.rows.shape).copy()
        base = self.rows
        while exp:
            if exp & 1:
                result = self._bmul(result, base)
            base = self._bmul(base, base)
            exp >>= 1
        return result

    def _is_ident_mask(self, arr: np.ndarray) -> np.ndarray:
        return (arr == self.ident).all(axis=1)

    def count_exact_order(self, s: int) -> int:
        if s == 1:
            return 1
        full = self._is_ident_mask(self._bpow(s))
        for p in {p for p in range(2, s + 1) if s % p == 0 and _is_prime(p)}:
            full &= ~self._is_ident_mask(self._bpow(s // p))
        return int(full.sum())

    def involution_rows(self) -> np.ndarray:
        sq = self._bmul(self.rows, self.rows)
        mask = self._is_ident_mask(sq) & ~self._is_ident_mask(self.rows)
        return self.rows[mask]

    def _right_mul_fixed(self, arr: np.ndarray, x_rows: np.ndarray) -> np.ndarray:
        return _mask_table(x_rows, self.n)[arr]

    def _left_mul_fixed(self, x_rows: np.ndarray, arr: np.ndarray) -> np.ndarray:
        out = np.zeros_like(arr)
        for i in range(self.n):
            mask = int(x_rows[i])
            c = 0
            while mask:
                if mask & 1:
                    out[:, i] ^= arr[:, c]
                mask >>= 1
                c += 1
        return out

    def commuting_involution_count(self, x_rows: np.ndarray, invs: np.ndarray) -> int:
        right = self._right_mul_fixed(invs, x_rows)  # y x
        left = self._left_mul_fixed(x_rows, invs)    # x y
        return int((right == left).all(axis=1).sum())

    def klein_pairs_total(self) -> int:
        """Number of ordered pairs of distinct commuting involutions."""
        invs = self.involution_rows()
        total = 0
        for x in invs:
            total += self.commuting_involution_count(x, invs) - 1
        return total

    def involution_classes(self, gen_mats: list[Matrix]) -> list[tuple[np.ndarray, int]]:
        """(representative rows, class size) under conjugation by the group."""
        invs = self.involution_rows()
        codes = invs.astype(np.uint64) @ self.shifts
        code_set = set(codes.tolist())
        gens = [(_rows_to_masks(g), _rows_to_masks(g.inverse())) for g in gen_mats]
        classes = []
        visited: set[int] = set()
        for row, code in zip(invs, codes.tolist()):
            if code in visited:
                continue
            orbit = {code}
            queue = [row]
            while queue:
                cur = queue.pop()
                for g_rows, ginv_rows in gens:
                    conj = self._right_mul_fixed(
                        self._left_mul_fixed(ginv_rows, cur[None, :]), g_rows)[0]
                    ccode = self._code_one(conj)
                    if ccode not in orbit:
                        orbit.add(ccode)
                        queue.append(conj)
            visited |= orbit
            if not orbit <= code_set:
                raise DomainError("conjugation left the involution set (bug)")
            classes.append((row, len(orbit)))
        return classes

    def klein_count_by_classes(self, gen_mats: list[Matrix]) -> int:
        invs = self.involution_rows()
        total = 0
        for rep, size in self.involution_classes(gen_mats):
            cnt = self.commuting_involution_count(rep, invs)
            total += size * (cnt - 1)
        if total % 6:
            raise DomainError("commuting pair total not divisible by 6 (bug)")
        return total // 6


class _GenericStore:
    """Exact exhaustive closure for any field, as hashable matrices."""

    def __init__(self, gens: list[Matrix], cap: int):
        ident = Matrix.identity(gens[0].spec, gens[0].n_rows)
        seen = {ident.rows: ident}
        frontier = [ident]
        while frontier:
            fresh = []
            for m in frontier:
                for g in gens:
                    prod = m.mul(g)
                    if prod.rows not in seen:
                        seen[prod.rows] = prod
                        fresh.append(prod)
                        if len(seen) > cap:
                            raise CapExceededError(
                                "group exceeds enumeration cap %d" % cap)
            frontier = fresh
        self.elements = list(seen.values())
        self.ident = ident

    @property
    def size(self) -> int:
        return len(self.elements)

    def count_exact_order(self, s: int) -> int:
        if s == 1:
            return 1
        primes = [p for p in range(2, s + 1) if s % p == 0 and _is_prime(p)]
        count = 0
        for m in self.elements:
            if m.pow(s).is_identity() and \
                    all(not m.pow(s // p).is_identity() for p in primes):
                count += 1
        return count

    def involutions(self) -> list[Matrix]:
        return [m for m in self.elements if not m.is_identity() and m.mul(m).is_identity()]

    def klein_pairs_total(self) -> int:
        invs = self.involutions()
        total = 0
        for x, y in itertools.combinations(invs, 2):
            if x.mul(y).rows == y.mul(x).rows:
                total += 2
        return total


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    return all(p % d for d in range(2, int(math.isqrt(p)) + 1))


def element_store(gens: list[Matrix], cap: int = ENUMERATION_CAP):
    if not gens:
        raise DomainError("need at least one generator (use the identity)")
    if gens[0].spec.q == 2 and gens[0].n_rows <= 8:
        return _Gf2Store(gens, cap)
    return _GenericStore(gens, cap)


def count_order_elements(gens: list[Matrix], s: int, cap: int = ENUMERATION_CAP) -> int:
    """|{g : |g| = s}| by exhaustive closure enumeration."""
    if s < 1:
        raise DomainError("order must be positive")
    store = element_store(gens, cap)
    return store.count_exact_order(s)


def count_klein_subgroups(gens: list[Matrix], cap: int = ENUMERATION_CAP,
                          method: str = "auto") -> int:
    """Number of Klein four-subgroups: commuting involution pairs over 6.

    method 'pairs' scans all ordered pairs; 'classes' collapses the outer
    involution to conjugacy-class representatives (same quantity, cheaper
    for large groups); 'auto' picks by involution count.
    """
    store = element_store(gens, cap)
    if isinstance(store, _Gf2Store):
        n_inv = store.involution_rows().shape[0]
        if method == "pairs" or (method == "auto" and n_inv <= 3000):
            total = store.klein_pairs_total()
            if total % 6:
                raise DomainError("commuting pair total not divisible by 6 (bug)")
            return total // 6
        return store.klein_count_by_classes(gens)
    total = store.klein_pairs_total()
    if total % 6:
        raise DomainError("commuting pair total not divisible by 6 (bug)")
    return total // 6


# ---------------------------------------------------------------------------
# symmetric group counts
# ---------------------------------------------------------------------------

def _order2_dividing(k: int) -> int:
    """Elements of order dividing 2 in S_k (identity included)."""
    total = 0
    for j in range(k // 2 + 1):
        total += math.factorial(k) // (2**j * math.factorial(j) * math.factorial(k - 2 * j))
    return total


def _order2_dividing_hyperoctahedral(m: int) -> int:
    """Elements of order dividing 2 in C2 wr S_m (signed permutations)."""
    total = 0
    for j in range(m // 2 + 1):
        perms = math.factorial(m) // (2**j * math.factorial(j) * math.factorial(m - 2 * j))
        total += perms * 2**(m - j)
    return total


def sn_klein_count(n: int) -> int:
    """Klein four-subgroups of S_n, by summing commuting-involution pairs
    over involution classes: the centralizer of an m-transposition
    involution is S_{n-2m} x (C2 wr S_m)."""
    if n > 30:
        raise DomainError("symmetric-group Klein count capped at degree 30")
    total_pairs = 0
    for m in range(1, n // 2 + 1):
        class_size = math.factorial(n) // (2**m * math.factorial(m) * math.factorial(n - 2 * m))
        j2_cent = _order2_dividing(n - 2 * m) * _order2_dividing_hyperoctahedral(m)
        total_pairs += class_size * (j2_cent - 2)  # minus identity, minus x itself
    if total_pairs % 6:
        raise DomainError("pair total not divisible by 6 (bug)")
    return total_pairs // 6


def sn_order4_count(t: int) -> int:
    """j_4(S_t): elements of order dividing 4, summed over cycle types
    with parts in {1, 2, 4}."""
    if t > 40:
        raise DomainError("order-4 count capped at degree 40")
    total = 0
    for c4 in range(t // 4 + 1):
        for c2 in range((t - 4 * c4) // 2 + 1):
            c1 = t - 4 * c4 - 2 * c2
            total += math.factorial(t) // (
                math.factorial(c1)
                * 2**c2 * math.factorial(c2)
                * 4**c4 * math.factorial(c4))
    return total


def sn_klein_brute(n: int) -> int:
    """Oracle: scan S_n literally (n <= 8)."""
    if n > 8:
        raise CapExceededError("brute force capped at S_8")
    elems = list(itertools.permutations(range(n)))
    invs = [p for p in elems if p != tuple(range(n))
            and all(p[p[i]] == i for i in range(n))]
    pairs = 0
    for x, y in itertools.combinations(invs, 2):
        if all(x[y[i]] == y[x[i]] for i in range(n)):
            pairs += 1
    if pairs % 3:
        raise DomainError("unordered pair total not divisible by 3 (bug)")
    return pairs // 3


def sn_order4_brute(t: int) -> int:
    if t > 8:
        raise CapExceededError("brute force capped at S_8")
    count = 0
    for p in itertools.permutations(range(t)):
        x = tuple(range(t))
        for _ in range(4):
            x = tuple(p[i] for i in x)
        if x == tuple(range(t)):
            count += 1
    return count


# ---------------------------------------------------------------------------
# matrix combinatorics over GF(q)
# ---------------------------------------------------------------------------

def q_product(i: int, j: int, q: int) -> int:
    """Q_i(j) = prod_{k=0}^{i-1} (q^j - q^k)."""
    out = 1
    for k in range(i):
        out *= q**j - q**k
    return out


def rank_count(b: int, c: int, r: int, q: int) -> int:
    """Matrices in M_{b,c}(q) of rank r."""
    if r < 0 or r > min(b, c):
        raise DomainError("rank %d out of range" % r)
    num = q_product(r, b, q) * q_product(r, c, q)
    den = q_product(r, r, q)
    assert num % den == 0
    return num // den


def psi(b: int, c: int, d: int, q: int) -> int:
    """Pairs (A, B) in M_{b,c}(q) x M_{c,d}(q) with AB = 0."""
    if min(b, c, d) < 0:
        raise DomainError("dimensions must be nonnegative")
    total = 0
    for r in range(min(b, c) + 1):
        total += rank_count(b, c, r, q) * q**(d * (c - r))
    return total


def _all_matrices(rows: int, cols: int, q: int):
    for flat in itertools.product(range(q), repeat=rows * cols):
        yield [list(flat[i * cols:(i + 1) * cols]) for i in range(rows)]


def _rank_mod_q(rows, q: int) -> int:
    """Row-reduction rank over the prime field GF(q), q prime."""
    m = [row[:] for row in rows]
    n_rows = len(m)
    n_cols = len(m[0]) if m else 0
    rank = 0
    for c in range(n_cols):
        piv = next((i for i in range(rank, n_rows) if m[i][c] % q), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = pow(m[rank][c], q - 2, q)
        m[rank] = [(x * inv) % q for x in m[rank]]
        for i in range(n_rows):
            if i != rank and m[i][c] % q:
                f = m[i][c]
                m[i] = [(x - f * y) % q for x, y in zip(m[i], m[rank])]
        rank += 1
    return rank


def psi_oracle(b: int, c: int, d: int, q: int, cap: int = TUPLE_CAP) -> int:
    """Independent count of pairs (A, B) with AB = 0.

    Literal pair enumeration while q^(bc+cd) is small; beyond that, every
    A is enumerated and its B's are counted through the nullspace
    dimension found by row reduction (rank-nullity, no product formulas).
    The A-side enumeration q^(bc) must stay under the cap.
    """
    if q**(b * c) > cap:
        raise CapExceededError("oracle budget exceeded")
    if b * c == 0 or c * d == 0:
        # one side is empty: every pair works
        return q**(b * c) * q**(c * d)
    if q**(b * c + c * d) <= 4_000_000:
        count = 0
        for a_mat in _all_matrices(b, c, q):
            for b_mat in _all_matrices(c, d, q):
                prod_zero = all(
                    sum(a_mat[i][k] * b_mat[k][j] for k in range(c)) % q == 0
                    for i in range(b) for j in range(d))
                if prod_zero:
                    count += 1
        return count
    count = 0
    for a_mat in _all_matrices(b, c, q):
        r = _rank_mod_q(a_mat, q)
        count += q**(d * (c - r))
    return count


def gaussian_binomial(n: int, m: int, q: int) -> int:
    if m < 0 or m > n:
        return 0
    num = 1
    den = 1
    for i in range(m):
        num *= q**(n - i) - 1
        den *= q**(i + 1) - 1
    assert num % den == 0
    return num // den


def totally_singular_count(space: FormedSpace, m: int) -> int:
    """Closed-form number of totally singular m-subspaces."""
    n = space.n
    if m < 0:
        raise DomainError("negative dimension")
    if m == 0:
        return 1
    if space.kind == "zero":
        if m > n:
            raise DomainError("m exceeds the space dimension")
        return gaussian_binomial(n, m, space.field.q)
    if m > n // 2:
        raise DomainError("m exceeds n/2")
    nu = space.witt_index
    if m > nu:
        return 0
    q = space.base_q
    if space.kind == "symplectic":
        out = gaussian_binomial(nu, m, q)
        for i in range(m):
            out *= q**(nu - i) + 1
        return out
    if space.kind == "quadratic":
        e = {1: 0, 0: 1, -1: 2}[space.eps]
        out = gaussian_binomial(nu, m, q)
        for i in range(m):
            out *= q**(nu + e - 1 - i) + 1
        return out
    if space.kind == "unitary":
        num = 1
        for i in range(m):
            num *= (q**(n - 2 * i) - (-1)**(n - 2 * i)) \
                * (q**(n - 2 * i - 1) - (-1)**(n - 2 * i - 1))
        den = 1
        for i in range(1, m + 1):
            den *= q**(2 * i) - 1
        assert num % den == 0
        return num // den
    raise DomainError("unknown kind %r" % space.kind)


# ---------------------------------------------------------------------------
# unipotent centralizers and square-zero block counts
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class JordanType:
    """Multiplicities of Jordan blocks of sizes 1..4."""
    l1: int = 0
    l2: int = 0
    l3: int = 0
    l4: int = 0

    def __post_init__(self):
        if min(self.l1, self.l2, self.l3, self.l4) < 0:
            raise DomainError("negative block multiplicity")

    @property
    def m(self) -> int:
        return self.l1 + 2 * self.l2 + 3 * self.l3 + 4 * self.l4

    def multiplicities(self) -> tuple[int, int, int, int]:
        return (self.l1, self.l2, self.l3, self.l4)

    def centralizer_exponent(self) -> int:
        """sum_i i*l_i^2 + 2 sum_{i<j} i*l_i*l_j."""
        ls = self.multiplicities()
        out = 0
        for i in range(4):
            out += (i + 1) * ls[i] ** 2
        for i in range(4):
            for j in range(i + 1, 4):
                out += 2 * (i + 1) * ls[i] * ls[j]
        return out


def unipotent_matrix(jt: JordanType, q: int) -> Matrix:
    """Block-diagonal unipotent matrix of the given Jordan type."""
    from .gf import field_of_size
    f = field_of_size(q)
    n = jt.m
    rows = [[int(i == j) for j in range(n)] for i in range(n)]
    off = 0
    for size, mult in zip((4, 3, 2, 1), (jt.l4, jt.l3, jt.l2, jt.l1)):
        for _ in range(mult):
            for i in range(size - 1):
                rows[off + i][off + i + 1] = 1
            off += size
    return Matrix.from_rows(f, rows)


def unipotent_centralizer_order(m: int, jt: JordanType, q: int,
                                cap: int = TUPLE_CAP) -> tuple[int, int]:
    """Exact |C_{GL_m(q)}(u)| for u of the given Jordan type, by solving
    Xu = uX and counting invertible members of the commutant, plus the
    documented exponent e = sum i l_i^2 + 2 sum_{i<j} i l_i l_j.

    The exact value always lands in [q^(e-m), q^e]; that window is
    asserted because it is a theorem, not a tuning target.
    """
    if jt.m != m:
        raise DomainError("Jordan type sums to %d, not %d" % (jt.m, m))
    u = unipotent_matrix(jt, q)
    f = u.spec
    # commutant: nullspace of X -> Xu - uX as an m^2-dimensional linear map
    cols = []
    for a in range(m):
        for b in range(m):
            basis_elt = [[0] * m for _ in range(m)]
            basis_elt[a][b] = 1
            e_mat = Matrix.from_rows(f, basis_elt)
            diff = e_mat.mul(u).sub(u.mul(e_mat))
            cols.append([x for row in diff.rows for x in row])
    op = Matrix.from_rows(f, list(zip(*cols)))
    basis = op.nullspace()
    dim = len(basis)
    if q**dim > cap:
        raise CapExceededError("commutant enumeration %d^%d exceeds cap" % (q, dim))
    count = 0
    for coeffs in itertools.product(range(f.q), repeat=dim):
        flat = [0] * (m * m)
        for coef, vec in zip(coeffs, basis):
            if coef:
                for idx, x in enumerate(vec):
                    if x:
                        flat[idx] = f.add(flat[idx], f.mul(coef, x))
        cand = Matrix.from_rows(f, [flat[i * m:(i + 1) * m] for i in range(m)])
        if cand.rank == m:
            count += 1
    exp = jt.centralizer_exponent()
    if not (q**max(exp - m, 0) <= count <= q**exp):
        raise DomainError("centralizer order %d escapes window [q^%d, q^%d] (bug)"
                          % (count, exp - m, exp))
    return count, exp


def nilpotent_block_bound_exponent(l1: int, l2: int, l: int, m: int) -> int:
    return (4 * l1 * (l - l1) + 2 * l2 * (m - 2 * l - l2)
            + 2 * (l - l1) * (m - 2 * l - l2) + 2 * l1 * l2)


def _square_zero_rank(rows, q: int) -> int | None:
    """Rank if the matrix squares to zero, else None."""
    size = len(rows)
    for i in range(size):
        for j in range(size):
            if sum(rows[i][k] * rows[k][j] for k in range(size)) % q:
                return None
    return _rank_mod_q(rows, q) if size else 0


def nilpotent_block_count(l1: int, l2: int, l: int, m: int, q: int,
                          cap: int = TUPLE_CAP) -> tuple[int, int]:
    """Exact count of square-zero block matrices

        [[A, B, C],
         [0, D, E],
         [0, 0, A]]

    with A of size l x l and rank l1 (A^2 = 0), D of size (m-2l) x (m-2l)
    and rank l2 (D^2 = 0), by literal enumeration; returned with the
    documented bound exponent."""
    if l < 0 or m < 2 * l:
        raise DomainError("block shape needs 0 <= 2l <= m")
    if 2 * l1 > l or 2 * l2 > m - 2 * l:
        raise DomainError("Jordan multiplicities exceed the block sizes")
    w = m - 2 * l
    free = 2 * l * l + w * w + 2 * l * w
    if q**free > cap:
        raise CapExceededError("block enumeration %d^%d exceeds cap" % (q, free))

    a_pool = [a for a in _all_matrices(l, l, q)
              if _square_zero_rank(a, q) == l1] if l else [[]]
    d_pool = [d for d in _all_matrices(w, w, q)
              if _square_zero_rank(d, q) == l2] if w else [[]]

    count = 0
    for a_mat in a_pool:
        for d_mat in d_pool:
            for b_mat in _all_matrices(l, w, q) if l * w else [[]]:
                # lambda^2 = 0 on the (1,2) block: A B + B D = 0
                ab_bd_zero = all(
                    (sum(a_mat[i][k] * b_mat[k][j] for k in range(l))
                     + sum(b_mat[i][k] * d_mat[k][j] for k in range(w))) % q == 0
                    for i in range(l) for j in range(w)) if l * w else True
                if not ab_bd_zero:
                    continue
                for e_mat in _all_matrices(w, l, q) if l * w else [[]]:
                    # (2,3) block: D E + E A = 0
                    de_ea_zero = all(
                        (sum(d_mat[i][k] * e_mat[k][j] for k in range(w))
                         + sum(e_mat[i][k] * a_mat[k][j] for k in range(l))) % q == 0
                        for i in range(w) for j in range(l)) if l * w else True
                    if not de_ea_zero:
                        continue
                    for c_mat in _all_matrices(l, l, q) if l else [[]]:
                        # (1,3) block: A C + B E + C A = 0
                        ok = all(
                            (sum(a_mat[i][k] * c_mat[k][j] for k in range(l))
                             + (sum(b_mat[i][k] * e_mat[k][j] for k in range(w)) if w else 0)
                             + sum(c_mat[i][k] * a_mat[k][j] for k in range(l))) % q == 0
                            for i in range(l) for j in range(l)) if l else True
                        if ok:
                            count += 1
    return count, nilpotent_block_bound_exponent(l1, l2, l, m)


def square_zero_block_census(m: int, q: int = 2) -> dict[tuple[int, int, int], int]:
    """Oracle for the block count: filter all m x m matrices with X^2 = 0
    into (l, l1, l2) cells by block shape and diagonal-block ranks.

    For each l the shape requires zero blocks below the diagonal of the
    (l, m-2l, l) partition and the lower-right block equal to the
    upper-left one; l1 and l2 are the ranks of the two diagonal blocks.
    A matrix may land in the cell of several l values.
    """
    if q**(m * m) > 4_000_000:
        raise CapExceededError("unstructured census too large")
    cells: dict[tuple[int, int, int], int] = {}
    for rows in _all_matrices(m, m, q):
        if _square_zero_rank(rows, q) is None:
            continue
        for l in range(0, m // 2 + 1):
            w = m - 2 * l
            lower_zero = all(
                rows[i][j] % q == 0
                for i in range(l, m) for j in range(l)
            ) and all(
                rows[i][j] % q == 0
                for i in range(l + w, m) for j in range(l, l + w)
            )
            if not lower_zero:
                continue
            if any(rows[l + w + i][l + w + j] != rows[i][j]
                   for i in range(l) for j in range(l)):
                continue
            l1 = _rank_mod_q([row[:l] for row in rows[:l]], q) if l else 0
            l2 = _rank_mod_q([row[l:l + w] for row in rows[l:l + w]], q) if w else 0
            key = (l, l1, l2)
            cells[key] = cells.get(key, 0) + 1
    return cells
