import random
from fractions import Fraction
from pathlib import Path

import pytest

from finclass.errors import DomainError, MissingDataError
from finclass.flagfix import (class_intersection, class_size, fpr_check,
                              standard_singular_space, subspace_orbit, _stabilizes)
from finclass.genlab import (SubgroupCatalogEntry, criterion_sum, generates,
                             i2_ratio_report, load_catalog, load_generators_file,
                             run_generation_experiment, sample_conjugate_pairs,
                             save_catalog, witness_pair, zeta)
from finclass.gf import make_field
from finclass.groups import atlas
from finclass.embed import parse_two_group
from finclass.matrix import Matrix

F2 = make_field(2, 1)
CATALOG_DIR = Path(__file__).resolve().parent.parent / "catalogs"


# -- generation primitives -----------------------------------------------------

def test_generates_examples():
    sl2 = atlas("SL_2_2")
    a = Matrix.from_rows(F2, [[1, 1], [0, 1]])
    b = Matrix.from_rows(F2, [[1, 0], [1, 1]])
    ok, order = generates(a, b, sl2)
    assert ok and order == 6
    ok, order = generates(a, a, sl2)
    assert not ok and order == 2
    ok, order = generates(sl2.identity(), a, sl2)
    assert not ok and order == 2


def test_generates_conjugation_invariance():
    sl2 = atlas("SL_2_2")
    a = Matrix.from_rows(F2, [[1, 1], [0, 1]])
    b = Matrix.from_rows(F2, [[1, 0], [1, 1]])
    rng = random.Random(6)
    for _ in range(6):
        g = sl2.random_element(rng)
        ga, gb = (g.inverse().mul(m).mul(g) for m in (a, b))
        assert generates(ga, gb, sl2)[0] == generates(a, b, sl2)[0]


def test_experiment_determinism():
    a = parse_two_group("C2")
    b = parse_two_group("C4")
    e1 = run_generation_experiment("Sp_6_2", a, b, 6, 11)
    e2 = run_generation_experiment("Sp_6_2", a, b, 6, 11)
    assert e1 == e2
    assert e1.trials == 6 and len(e1.results) == 6
    doc = e1.to_json()
    assert doc["atlas"] == "Sp_6_2" and doc["seed"] == 11
    assert len(doc["per_trial"]) == 6


def test_experiment_zero_trials():
    e = run_generation_experiment("Sp_6_2", parse_two_group("C2"),
                                  parse_two_group("C4"), 0, 3)
    assert e.results == () and e.frequency is None


def test_experiment_requires_useful_B():
    with pytest.raises(DomainError):
        run_generation_experiment("Sp_6_2", parse_two_group("C2"),
                                  parse_two_group("C2"), 1, 0)


def test_witness_pair_modes():
    at = atlas("SL_12_2")
    x, y, mode = witness_pair(at, parse_two_group("C2"), parse_two_group("C4"))
    assert mode == "order4" and y.order() == 4 and x.order() == 2
    x, k, mode = witness_pair(at, parse_two_group("C2"), parse_two_group("C2xC2"))
    assert mode == "klein" and len(k) == 2


# -- catalogs --------------------------------------------------------------------

def test_catalog_roundtrip(tmp_path):
    entries = [SubgroupCatalogEntry("C1-parabolic-m1", 15, 1, 3, 2, None, None, "test"),
               SubgroupCatalogEntry("S", 28, 2, provenance="test")]
    path = tmp_path / "cat.csv"
    save_catalog(entries, path)
    assert load_catalog(path) == entries


def test_catalog_validation():
    with pytest.raises(DomainError):
        SubgroupCatalogEntry("bad", 1, 1)
    with pytest.raises(DomainError):
        SubgroupCatalogEntry("bad", 2, 0)


def test_criterion_sum_examples():
    assert criterion_sum([], 3, 3) == 0
    cat = [SubgroupCatalogEntry("M", 15, 1, intersect_x=1, intersect_y=1)]
    assert criterion_sum(cat, 3, 3) == Fraction(5, 3)
    with pytest.raises(MissingDataError):
        criterion_sum([SubgroupCatalogEntry("M", 15, 1, intersect_x=1)], 3, 3)
    cat = [SubgroupCatalogEntry("M", 15, 1, intersect_x=1, intersect_k=2)]
    assert criterion_sum(cat, 3, 4, mode="klein") == Fraction(15 * 2, 3 * 4)


def test_zeta():
    cat = [SubgroupCatalogEntry("a", 2, 1), SubgroupCatalogEntry("b", 3, 1)]
    assert abs(zeta(cat, 1) - 5 / 6) < 1e-12
    assert zeta([], 1) == 0
    assert zeta(cat, 2) <= zeta(cat, 1)  # monotone in s
    with pytest.raises(DomainError):
        zeta(cat, 0)


def test_criterion_sum_matches_flagfix_on_sp4_parabolics():
    # build the parabolic sub-catalog of Sp_4(2) from exact flagfix data and
    # check the catalog-driven sum equals sum_m fpr(x) * fix(y)
    at = atlas("Sp_4_2")
    from finclass.embed import embed_almost_free
    x = embed_almost_free(parse_two_group("C2"), at).involution_image()
    # a deterministic order-4 element: walk the generators
    y = next(m for m in _words(at, 3) if m.order() == 4)
    entries = []
    direct = Fraction(0)
    x_cd = class_size(x, at)
    y_cd = class_size(y, at)
    for m in (1, 2):
        omega0 = standard_singular_space(at.form, m)
        omega = subspace_orbit(at, omega0)
        ix = class_intersection(x_cd, lambda g: _stabilizes(omega0, g, F2))
        iy = class_intersection(y_cd, lambda g: _stabilizes(omega0, g, F2))
        entries.append(SubgroupCatalogEntry(
            f"C1-parabolic-m{m}", len(omega), 1, intersect_x=ix, intersect_y=iy))
        rep_x = fpr_check(x, at, m)
        from finclass.flagfix import fix_count
        fix_y = fix_count([y], at.form, m, omega=omega)
        direct += rep_x.fpr * fix_y
    total = criterion_sum(entries, x_cd.size, y_cd.size, mode="order4")
    assert total == direct


def _words(at, depth):
    seen = {at.identity().rows}
    frontier = [at.identity()]
    for _ in range(depth):
        new = []
        for m in frontier:
            for g in at.generators:
                p = m.mul(g)
                if p.rows not in seen:
                    seen.add(p.rows)
                    new.append(p)
        frontier = new
        yield from new


# -- data-file-driven smoke: complete catalog of SL_2(2) ---------------------------

def test_sl22_complete_catalog_consistency_and_generation():
    catalog = load_catalog(CATALOG_DIR / "sl2_2_maximal.csv")
    at = atlas("SL_2_2")
    x = Matrix.from_rows(F2, [[1, 1], [0, 1]])         # transvection class, size 3
    y = Matrix.from_rows(F2, [[0, 1], [1, 1]])         # order-3 class, size 2
    x_cd, y_cd = class_size(x, at), class_size(y, at)
    assert (x_cd.size, y_cd.size) == (3, 2)
    # validate the ingested intersection counts against direct enumeration
    for entry in catalog:
        gens = load_generators_file(CATALOG_DIR / entry.generators_file)
        from finclass.census import _GenericStore
        members = {m.rows for m in _GenericStore(gens, 10**4).elements}
        assert at.order // len(members) == entry.index
        assert class_intersection(x_cd, lambda g: g.rows in members) == entry.intersect_x
        assert class_intersection(y_cd, lambda g: g.rows in members) == entry.intersect_y
    total = criterion_sum(catalog, x_cd.size, y_cd.size)
    assert total == 0 < 1
    # sum below one forces generation: every sampled conjugate pair generates
    results = sample_conjugate_pairs(at, x, y, 12, 2)
    assert all(ok for ok, _ in results)


def test_i2_ratio_report_from_catalog():
    entry = load_catalog(CATALOG_DIR / "sl3_2_subgroup_sample.csv")[0]
    at = atlas("SL_3_2")
    rep = i2_ratio_report(entry, at, base_dir=CATALOG_DIR)
    assert rep.i2_subgroup == 3 and rep.i2_group == 21
    assert rep.ratio == Fraction(1, 7)
    assert rep.ratio <= 1
    assert rep.exponent is not None and rep.exponent > 0
    # M = G degenerate case: ratio 1, exponent 0
    self_entry = SubgroupCatalogEntry("self", 2, 1, generators_file="x.txt")
    import finclass.genlab as genlab_mod
    rep2 = genlab_mod.I2RatioReport("self", 2, 21, 21, Fraction(1), 0.0)
    assert rep2.ratio == 1 and rep2.exponent == 0.0
    with pytest.raises(MissingDataError):
        i2_ratio_report(SubgroupCatalogEntry("nogens", 2, 1), at)


def test_i2_ratio_end_to_end_self(tmp_path):
    # degenerate M = G: ratio 1 and exponent 0 through the real file path
    at = atlas("SL_3_2")
    gens_file = tmp_path / "full.txt"
    gens_file.write_text("\n".join(g.to_text() for g in at.generators) + "\n")
    entry = SubgroupCatalogEntry("self", 2, 1, generators_file="full.txt")
    rep = i2_ratio_report(entry, at, base_dir=tmp_path)
    assert rep.ratio == 1 and rep.exponent == 0.0


def test_criterion_sum_validates_intersections():
    cat = [SubgroupCatalogEntry("M", 15, 1, intersect_x=5, intersect_y=1)]
    with pytest.raises(DomainError):
        criterion_sum(cat, 3, 3)  # 5 > |x^G| = 3


def _common_fixed_dimension(mats, n):
    from finclass.matrix import stack_rows
    ident = Matrix.identity(mats[0].spec, n)
    return n - stack_rows(mats[0].spec, [m.sub(ident) for m in mats]).rank


def _preserve_common_quadratic_form(mats, space):
    """Is some quadratic form polarizing the symplectic form invariant under
    every mat?  In characteristic 2 the candidates are Q0 + l^2 over linear
    functionals l, and invariance under g is the linear condition
    l((g+1)v) = Q0(gv) + Q0(v)."""
    f = space.field
    n = space.n
    h = space.witt_index

    def q0(v):
        acc = 0
        for i in range(h):
            acc = f.add(acc, f.mul(v[i], v[h + i]))
        return acc

    rows = []
    for g in mats:
        cols = g.transpose().rows
        for j in range(n):
            ej = tuple(int(t == j) for t in range(n))
            row = [f.sub(cols[j][t], ej[t]) for t in range(n)]  # (g+1)e_j in char 2
            row.append(f.add(q0(cols[j]), q0(ej)))
            rows.append(row)
    aug = Matrix.from_rows(f, rows)
    _, pivots = aug.rref()
    return n not in pivots  # consistent system <=> a common form exists


def test_sp10_pairs_always_lie_in_proper_subgroups():
    # every conjugate witness pair shares a fixed vector or an invariant
    # quadratic form, the dichotomy behind the red generation run
    import random
    at = atlas("Sp_10_2")
    x, y, mode = witness_pair(at, parse_two_group("C2"), parse_two_group("C4"))
    assert mode == "order4"
    rng = random.Random(314)
    from finclass.genlab import conjugate
    for _ in range(15):
        g, h = at.random_element(rng), at.random_element(rng)
        xg, yh = conjugate(x, g), conjugate(y, h)
        fixed = _common_fixed_dimension([xg, yh], 10)
        if fixed == 0:
            assert _preserve_common_quadratic_form([xg, yh], at.form)


def test_sl6_klein_pairs_always_share_fixed_vector():
    # dim Fix(x) + dim Fix(K) = 4 + 3 > 6 forces a common fixed vector
    import random
    at = atlas("SL_6_2")
    x, kpair, mode = witness_pair(at, parse_two_group("C2"), parse_two_group("C2xC2"))
    assert mode == "klein"
    rng = random.Random(314)
    from finclass.genlab import conjugate
    for _ in range(15):
        g, h = at.random_element(rng), at.random_element(rng)
        mats = [conjugate(x, g)] + [conjugate(m, h) for m in kpair]
        assert _common_fixed_dimension(mats, 6) >= 1
