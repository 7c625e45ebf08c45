import random

import pytest

from finclass.census import totally_singular_count
from finclass.errors import CapExceededError, DomainError
from finclass.flagfix import (act_on_subspace,
                              class_intersection, class_size,
                              enumerate_totally_singular, fix_count, fpr_check,
                              involution_fpr_exponent, klein_fix_exponent,
                              order4_fix_exponent, parabolic_bound_report,
                              product_target_exponent, standard_singular_space,
                              subgroup_class_size, subspace_orbit, _stabilizes)
from finclass.forms import formed_space
from finclass.embed import embed_almost_free, parse_two_group
from finclass.gf import make_field
from finclass.groups import atlas, group_order, parse_group
from finclass.matrix import Matrix

F2 = make_field(2, 1)


def perm_mat(p):
    n = len(p)
    return Matrix.from_rows(F2, [[int(p[j] == i) for j in range(n)] for i in range(n)])


# -- enumeration ------------------------------------------------------------------

def test_stream_examples():
    sp = formed_space(2, "symplectic", 2)
    assert sum(1 for _ in enumerate_totally_singular(sp, 1)) == 3
    qp = formed_space(2, "quadratic", 2, 1)
    bases = [b.rows for b in enumerate_totally_singular(qp, 1)]
    assert bases == [((1, 0),), ((0, 1),)]
    assert [b.m for b in enumerate_totally_singular(qp, 0)] == [0]


@pytest.mark.parametrize("kind,eps", [("zero", None), ("symplectic", None),
                                      ("quadratic", 1), ("quadratic", -1),
                                      ("unitary", None)])
@pytest.mark.parametrize("q", [2, 3])
def test_stream_length_matches_count(kind, eps, q):
    for n in range(2, 6):
        if kind in ("symplectic", "quadratic") and n % 2:
            continue
        space = formed_space(n, kind, q, eps)
        mmax = n if kind == "zero" else n // 2
        for m in range(0, mmax + 1):
            want = totally_singular_count(space, m)
            got = list(enumerate_totally_singular(space, m))
            assert len(got) == want
            assert len({b.rows for b in got}) == want  # duplicate-free
            for b in got:
                assert space.is_totally_singular(b.rows)


def test_stream_cap():
    sp = formed_space(6, "zero", 3)
    with pytest.raises(CapExceededError):
        list(enumerate_totally_singular(sp, 3, cap=100))


# -- fix counts ----------------------------------------------------------------------

def test_fix_examples():
    zero2 = formed_space(2, "zero", 2)
    tv = Matrix.from_rows(F2, [[1, 1], [0, 1]])
    assert fix_count([tv], zero2, 1) == 1  # only <e1>
    assert fix_count([Matrix.identity(F2, 2)], zero2, 1) == 3  # everything
    kp = [perm_mat((1, 0, 3, 2)), perm_mat((2, 3, 0, 1))]
    zero4 = formed_space(4, "zero", 2)
    assert fix_count(kp, zero4, 1) == 1  # only the all-ones line


def test_fix_monotonicity():
    zero4 = formed_space(4, "zero", 2)
    a = perm_mat((1, 0, 3, 2))
    b = perm_mat((2, 3, 0, 1))
    p1 = fix_count([], zero4, 1)
    assert p1 == totally_singular_count(zero4, 1)
    fa, fb, fab = fix_count([a], zero4, 1), fix_count([b], zero4, 1), fix_count([a, b], zero4, 1)
    assert fab <= min(fa, fb) <= p1


def test_fix_conjugation_invariance():
    at = atlas("Sp_4_2")
    emb = embed_almost_free(parse_two_group("C2"), at)
    x = emb.involution_image()
    rng = random.Random(3)
    base = fix_count([x], at.form, 1)
    for _ in range(5):
        g = at.random_element(rng)
        xg = g.inverse().mul(x).mul(g)
        assert fix_count([xg], at.form, 1) == base


# -- conjugacy classes ------------------------------------------------------------------

def test_class_size_examples():
    sl2 = atlas("SL_2_2")
    tv = Matrix.from_rows(F2, [[1, 1], [0, 1]])
    cd = class_size(tv, sl2)
    assert cd.size == 3
    assert class_size(sl2.identity(), sl2).size == 1
    assert class_intersection(cd, lambda g: True) == 3
    assert class_intersection(cd, lambda g: False) == 0
    std1 = standard_singular_space(sl2.form, 1)
    assert class_intersection(cd, lambda g: _stabilizes(std1, g, F2)) == 1


def test_class_size_divides_order_and_centralizer_product():
    # |x^G| * |C(x)| = |G| with the centralizer counted independently
    from finclass.census import _GenericStore
    at = atlas("Sp_4_2")
    emb = embed_almost_free(parse_two_group("C2"), at)
    x = emb.involution_image()
    cd = class_size(x, at)
    assert at.order % cd.size == 0
    store = _GenericStore(at.generators, 10**5)
    cent = sum(1 for m in store.elements
               if m.mul(x).rows == x.mul(m).rows)
    assert cd.size * cent == at.order


def test_embedded_involution_class_in_sp6():
    at = atlas("Sp_6_2")
    emb = embed_almost_free(parse_two_group("C2"), at)
    cd = class_size(emb.involution_image(), at)
    assert group_order(parse_group("Sp_6_2")) % cd.size == 0
    assert 1451520 % cd.size == 0


def test_class_cap():
    at = atlas("Sp_6_2")
    emb = embed_almost_free(parse_two_group("C2"), at)
    with pytest.raises(CapExceededError):
        class_size(emb.involution_image(), at, cap=3)


# -- the double-counting identity -----------------------------------------------------------

def test_fpr_transvection_sl22():
    sl2 = atlas("SL_2_2")
    tv = Matrix.from_rows(F2, [[1, 1], [0, 1]])
    rep = fpr_check(tv, sl2, 1)
    assert (rep.fix, rep.omega_size, rep.intersection, rep.class_size) == (1, 3, 1, 3)
    assert rep.lhs() == rep.rhs() == 3
    assert rep.fpr == 1 / 3 or str(rep.fpr) == "1/3"


def test_fpr_identity_element():
    at = atlas("Sp_4_2")
    rep = fpr_check(at.identity(), at, 1)
    assert rep.fpr == 1


def test_fpr_embedded_involution_sp4():
    at = atlas("Sp_4_2")
    emb = embed_almost_free(parse_two_group("C2"), at)
    rep = fpr_check(emb.involution_image(), at, 1)
    assert rep.omega_size == 15
    assert rep.lhs() == rep.rhs()
    assert rep.transitive


def test_fpr_klein_case():
    at = atlas("SL_4_2")
    pair = (perm_mat((1, 0, 3, 2)), perm_mat((2, 3, 0, 1)))
    rep = fpr_check(pair, at, 1)
    assert rep.lhs() == rep.rhs()
    members = subgroup_class_size(pair, at)
    assert len(members) == rep.class_size


def test_subspace_orbit_transitivity():
    at = atlas("Sp_4_2")
    for m in (1, 2):
        orbit = subspace_orbit(at, standard_singular_space(at.form, m))
        assert len(orbit) == totally_singular_count(at.form, m)


def test_standard_space_bounds():
    f = formed_space(4, "quadratic", 2, -1)
    with pytest.raises(DomainError):
        standard_singular_space(f, 2)  # witt index is 1


# -- exponent tables ---------------------------------------------------------------------

def test_exponent_tables_verbatim():
    from fractions import Fraction
    at = atlas("Sp_8_2")  # n = 8
    assert involution_fpr_exponent(at, 1) == Fraction(13, 4)   # m(2n-3m)/4
    assert order4_fix_exponent(at, 1) == Fraction(13, 8)       # m(2n-3m)/8
    assert klein_fix_exponent(at, 1) == Fraction(76, 44)       # m(11n-12m)/44
    assert product_target_exponent(at, 1, "klein") == Fraction(67, 44)  # m(11n-21m)/44
    sl = atlas("SL_4_2")
    assert involution_fpr_exponent(sl, 1) == Fraction(3, 2)    # m(n-m)/2
    assert order4_fix_exponent(sl, 1) == Fraction(3, 4)
    su = atlas("SU_4_2")
    assert involution_fpr_exponent(su, 1) == Fraction(5, 2)    # m(2n-3m)/2
    assert product_target_exponent(su, 2, "order4") == Fraction(1, 1)


def test_parabolic_bound_report():
    at = atlas("Sp_4_2")
    emb = embed_almost_free(parse_two_group("C2"), at)
    x = emb.involution_image()
    rep = parabolic_bound_report(x, x, at, 1, mode="order4")
    assert rep.product == rep.fpr_x * rep.fix_partner
    j = rep.to_json()
    assert j["m"] == 1 and j["mode"] == "order4"
    pair = (x, x.mul(at.identity()))  # not a useful Klein pair; exercise validation
    with pytest.raises(DomainError):
        parabolic_bound_report(x, (x,), at, 1, mode="klein")


def test_act_on_subspace_canonical():
    at = atlas("SL_3_2")
    basis = standard_singular_space(at.form, 2)
    g = at.generators[-1]
    moved = act_on_subspace(basis, g, F2)
    assert moved.m == 2
    # acting back with the inverse returns the canonical representative
    assert act_on_subspace(moved, g.inverse(), F2).rows == basis.rows


def test_parabolic_report_sl3_transvections():
    # transvection vs transvection in SL_3(2) at m = 1: |Omega| = 7 and the
    # documented fix-partner target is m(n-m)/4 = 1/2
    from fractions import Fraction
    at = atlas("SL_3_2")
    tv = Matrix.from_rows(F2, [[1, 1, 0], [0, 1, 0], [0, 0, 1]])
    rep = parabolic_bound_report(tv, tv, at, 1, mode="order4")
    assert rep.target_exponent_fix_partner == Fraction(1, 2)
    assert rep.fpr_x.denominator <= 21
    assert fpr_check(tv, at, 1).omega_size == 7
    j = rep.to_json()
    assert j["target_exponent_f"] == "1/2"


def test_fpr_report_json_schema():
    at = atlas("SL_2_2")
    tv = Matrix.from_rows(F2, [[1, 1], [0, 1]])
    doc = fpr_check(tv, at, 1).to_json()
    assert {"m", "omega_size", "fix", "class_size", "intersection",
            "fpr_num", "fpr_den", "measured_exponent"} <= set(doc)
    assert doc["measured_exponent"] < 0  # fpr = 1/3 under base q = 2


def test_fpr_random_witnesses_property():
    # the double-counting identity must hold for arbitrary group elements,
    # not only the curated witnesses (fpr_check raises on violation)
    rng = random.Random(17)
    for label, mrange in [("SL_3_2", (1, 2)), ("Sp_4_2", (1, 2)), ("SL_4_2", (1, 2, 3))]:
        at = atlas(label)
        for _ in range(4):
            w = at.random_element(rng)
            for m in mrange:
                rep = fpr_check(w, at, m)
                assert rep.lhs() == rep.rhs()


def test_parabolic_report_identity_pair():
    # identity vs identity: fpr = 1 and fix = p_m, so the product is p_m
    at = atlas("Sp_4_2")
    ident = at.identity()
    for m in (1, 2):
        rep = parabolic_bound_report(ident, ident, at, m, mode="order4")
        p_m = totally_singular_count(at.form, m)
        assert rep.fpr_x == 1
        assert rep.fix_partner == p_m
        assert rep.product == p_m
        assert rep.to_json()["target_exponent_f"]  # exponent columns emitted


def test_fpr_sp6_embedded_involution():
    # larger-scale instance of the identity: |Omega| = 63 singular points
    at = atlas("Sp_6_2")
    emb = embed_almost_free(parse_two_group("C2"), at)
    rep = fpr_check(emb.involution_image(), at, 1)
    assert rep.omega_size == 63
    assert rep.lhs() == rep.rhs()
    assert at.order % rep.class_size == 0
