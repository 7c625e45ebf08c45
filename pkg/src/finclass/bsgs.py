"""Schreier-Sims order engine.

Matrix groups act on the nonzero vectors of GF(q^delta)^n (a faithful
action: a matrix is determined by its values on the standard basis), and
exact orders come from a base-and-strong-generating-set computation on
that permutation action.

The build is randomized (product-replacement elements are sifted until
the chain looks stable) followed by a deterministic verification pass
that sifts every Schreier generator, so returned orders are exact, not
Monte-Carlo.  Because every strong generator is a genuine word in the
inputs, the partial order prod(orbit sizes) can never exceed the true
order; when a caller knows the order of an ambient group, hitting that
value early is already a proof of generation and the verification pass
can be skipped (`target_order`).

Base points are standard basis vectors in index order, extended by other
moved points only when needed, so chains are reproducible.
"""

from __future__ import annotations

import random

import numpy as np

from .errors import CapExceededError, DomainError
from .matrix import Matrix

DEGREE_CAP = 1 << 22
_RANDOM_SEED = 0x5EED
_CLEAN_SIFTS = 12


def _mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Composition 'apply b first, then a'."""
    return a[b]


def _inv(a: np.ndarray) -> np.ndarray:
    out = np.empty_like(a)
    out[a] = np.arange(len(a), dtype=a.dtype)
    return out


def _is_identity(a: np.ndarray) -> bool:
    return bool((a == np.arange(len(a), dtype=a.dtype)).all())


class _Level:
    __slots__ = ("base", "slot", "points", "tvs", "tvs_inv", "done")

    def __init__(self, base: int, degree: int):
        self.base = base
        self.slot = np.full(degree, -1, dtype=np.int32)
        self.points: list[int] = [base]
        ident = np.arange(degree, dtype=np.int32)
        self.tvs: list[np.ndarray] = [ident]
        self.tvs_inv: list[np.ndarray] = [ident]
        self.slot[base] = 0
        self.done: set[tuple[int, int]] = set()  # (orbit index, strong gen id)


class StabilizerChain:
    """Stabilizer chain over a fixed degree with preferred base points.

    Strong generators are stored once with the deepest level whose base
    prefix they fix (their home); level i sees every generator with home
    >= i, the nested view Schreier's lemma needs.  Orbits, transversals
    and the Schreier-generator bookkeeping all use that view, so `verify`
    really does certify the chain condition at every level.
    """

    def __init__(self, degree: int, base_hint: list[int] | None = None):
        self.degree = degree
        self.base_hint = list(base_hint or [])
        self.levels: list[_Level] = []
        self.strong: list[tuple[np.ndarray, int]] = []  # (perm, home level)

    # -- core operations ------------------------------------------------
    def sift(self, g: np.ndarray, start: int = 0) -> tuple[np.ndarray | None, int]:
        """Reduce g through the chain; (None, k) means g sifted to identity."""
        for idx in range(start, len(self.levels)):
            lv = self.levels[idx]
            p = int(g[lv.base])
            s = lv.slot[p]
            if s < 0:
                return g, idx
            if s != 0:
                g = _mul(lv.tvs_inv[s], g)
        if _is_identity(g):
            return None, len(self.levels)
        return g, len(self.levels)

    def _new_base_point(self, g: np.ndarray) -> int:
        for p in self.base_hint:
            if g[p] != p:
                return p
        moved = np.nonzero(g != np.arange(self.degree, dtype=g.dtype))[0]
        return int(moved[0])

    def _extend_orbit(self, idx: int) -> None:
        """Grow level idx's orbit/transversals under its generator view."""
        lv = self.levels[idx]
        gens = [g for g, home in self.strong if home >= idx]
        i = 0
        while i < len(lv.points):
            p = lv.points[i]
            t = lv.tvs[i]
            for g in gens:
                q = int(g[p])
                if lv.slot[q] < 0:
                    lv.slot[q] = len(lv.points)
                    lv.points.append(q)
                    tn = _mul(g, t)
                    lv.tvs.append(tn)
                    lv.tvs_inv.append(_inv(tn))
            i += 1

    def add_generator(self, g: np.ndarray, level_idx: int) -> None:
        """Install a strong generator whose fixed base prefix is level_idx."""
        if level_idx == len(self.levels):
            self.levels.append(_Level(self._new_base_point(g), self.degree))
        self.strong.append((g.astype(np.int32, copy=False), level_idx))
        for idx in range(level_idx + 1):
            self._extend_orbit(idx)

    def insert(self, g: np.ndarray) -> bool:
        """Sift g and absorb the residue; True if the chain grew."""
        residue, idx = self.sift(g)
        if residue is None:
            return False
        self.add_generator(residue, idx)
        return True

    def order(self) -> int:
        out = 1
        for lv in self.levels:
            out *= len(lv.points)
        return out

    # -- deterministic completion ----------------------------------------
    def _process_level(self, idx: int) -> bool:
        """Sift unprocessed Schreier generators of level idx (with generators
        drawn from the nested view); True if anything was added."""
        lv = self.levels[idx]
        added = False
        i = 0
        while i < len(lv.points):
            for gid, (g, home) in enumerate(self.strong):
                if home < idx:
                    continue
                key = (i, gid)
                if key in lv.done:
                    continue
                lv.done.add(key)
                t = lv.tvs[i]
                p = int(g[lv.points[i]])
                s = lv.slot[p]
                u = _mul(lv.tvs_inv[s], _mul(g, t))
                residue, stuck = self.sift(u, idx + 1)
                if residue is not None:
                    self.add_generator(residue, stuck)
                    added = True
            i += 1
        return added

    def verify(self) -> None:
        """Deterministic pass: every Schreier generator at every level sifts
        to identity, which certifies the chain and makes order() exact."""
        changed = True
        while changed:
            changed = False
            for idx in range(len(self.levels) - 1, -1, -1):
                if self._process_level(idx):
                    changed = True


def _random_products(gens: list[np.ndarray], rng: random.Random):
    """Product-replacement stream over the given permutations."""
    degree = len(gens[0])
    slots = list(gens) * max(1, (10 + len(gens) - 1) // len(gens))
    acc = np.arange(degree, dtype=np.int32)
    for _ in range(50):  # burn-in
        i, j = rng.randrange(len(slots)), rng.randrange(len(slots))
        if i == j:
            continue
        slots[i] = _mul(slots[i], slots[j])
    while True:
        for _ in range(3):
            i, j = rng.randrange(len(slots)), rng.randrange(len(slots))
            if i == j:
                continue
            slots[i] = _mul(slots[i], slots[j])
            acc = _mul(acc, slots[i])
        yield acc


def perm_group_order(perms: list[np.ndarray], base_hint: list[int] | None = None,
                     target_order: int | None = None, seed: int = _RANDOM_SEED) -> int:
    """Exact order of the permutation group generated by `perms`.

    With `target_order` set (the order of an ambient group known to
    contain the generators) the randomized phase may return early once
    the chain reaches it; otherwise a deterministic verification pass
    runs and the result is unconditional.
    """
    perms = [p.astype(np.int32, copy=False) for p in perms]
    perms = [p for p in perms if not _is_identity(p)]
    if not perms:
        return 1
    chain = StabilizerChain(len(perms[0]), base_hint)
    for p in perms:
        chain.insert(p)
    rng = random.Random(seed)
    stream = _random_products(perms, rng)
    clean = 0
    while clean < _CLEAN_SIFTS:
        if target_order is not None and chain.order() == target_order:
            return target_order
        if chain.insert(next(stream)):
            clean = 0
        else:
            clean += 1
    if target_order is not None and chain.order() == target_order:
        return target_order
    chain.verify()
    return chain.order()


# -- matrix groups on nonzero vectors -------------------------------------

def vector_points(spec, n: int) -> int:
    """Degree of the nonzero-vector action."""
    return spec.q**n - 1


def encode_vector(v: tuple[int, ...], q: int) -> int:
    """Nonzero vector -> point index (big-endian digit code minus one)."""
    code = 0
    for x in v:
        code = code * q + x
    return code - 1


def decode_vector(point: int, q: int, n: int) -> tuple[int, ...]:
    code = point + 1
    out = [0] * n
    for i in range(n - 1, -1, -1):
        out[i] = code % q
        code //= q
    return tuple(out)


def matrix_to_perm(m: Matrix) -> np.ndarray:
    """The permutation v -> m @ v of nonzero column vectors."""
    q = m.spec.q
    n = m.n_rows
    degree = q**n - 1
    if degree > DEGREE_CAP:
        raise CapExceededError("action degree %d exceeds cap %d" % (degree, DEGREE_CAP))
    if q == 2:
        # mask trick: image of a bitmask is the XOR of column masks at its set bits
        col_masks = [sum(m.rows[i][j] << (n - 1 - i) for i in range(n)) for j in range(n)]
        table = np.zeros(1 << n, dtype=np.int64)
        for code in range(1, 1 << n):
            low = code & -code
            j = n - low.bit_length()
            table[code] = table[code ^ low] ^ col_masks[j]
        return (table[1:] - 1).astype(np.int32)
    out = np.empty(degree, dtype=np.int32)
    for point in range(degree):
        v = decode_vector(point, q, n)
        out[point] = encode_vector(m.apply(v), q)
    return out


def standard_basis_points(q: int, n: int) -> list[int]:
    return [q ** (n - 1 - i) - 1 for i in range(n)]


def bsgs_order(gens: list[Matrix], target_order: int | None = None) -> int:
    """Exact order of the matrix group generated by `gens`.

    Computed through the permutation action on nonzero vectors; the
    action degree q^(delta n) - 1 must stay under the configured cap.
    An empty generator list yields the trivial group.
    """
    if not gens:
        return 1
    spec = gens[0].spec
    n = gens[0].n_rows
    for g in gens:
        if g.spec != spec or g.n_rows != n or g.n_cols != n:
            raise DomainError("generators must be square matrices over one field")
    perms = [matrix_to_perm(g) for g in gens]
    return perm_group_order(perms, standard_basis_points(spec.q, n),
                            target_order=target_order)
