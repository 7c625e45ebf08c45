import pytest
from hypothesis import given, strategies as st

from finclass.errors import DomainError
from finclass.gf import arith, field_of_size, frobenius, make_field

SMALL_FIELDS = [(2, 1), (3, 1), (2, 2), (5, 1), (2, 3), (3, 2), (7, 1), (2, 4)]


def test_prime_fields():
    f2 = make_field(2, 1)
    assert f2.add(1, 1) == 0
    f3 = make_field(3, 1)
    assert f3.mul(2, 2) == 1
    assert f3.div(2, 2) == 1


def test_gf4_modulus_and_arithmetic():
    f4 = make_field(2, 2)
    assert f4.modulus == (1, 1, 1)  # x^2 + x + 1
    w = 2  # the class of x
    assert f4.mul(w, 3) == 1  # w * (w + 1) = 1
    assert f4.add(w, w) == 0


def test_frobenius_examples():
    f4 = make_field(2, 2)
    assert f4.frobenius(2, 1) == 3  # w^2 = w + 1
    assert f4.frobenius(0, 5) == 0
    f2 = make_field(2, 1)
    assert f2.frobenius(1, 5) == 1


def test_make_field_rejects_bad_input():
    with pytest.raises(DomainError):
        make_field(4, 1)
    with pytest.raises(DomainError):
        make_field(2, 0)
    with pytest.raises(DomainError):
        make_field(2, 17)  # 2^17 over the size cap


def test_make_field_deterministic():
    a = make_field(3, 2)
    b = make_field(3, 2)
    assert a.modulus == b.modulus == (1, 0, 1)  # x^2 + 1 over GF(3)


def test_field_of_size():
    assert field_of_size(8).modulus == (1, 1, 0, 1)  # x^3 + x + 1
    assert field_of_size(9) is make_field(3, 2)
    with pytest.raises(DomainError):
        field_of_size(6)


@pytest.mark.parametrize("p,e", SMALL_FIELDS)
def test_field_axioms_exhaustive(p, e):
    f = make_field(p, e)
    if f.q > 64:
        els = list(range(0, f.q, max(1, f.q // 40)))
    else:
        els = list(f.elements())
    for a in els:
        for b in els:
            assert f.add(a, b) == f.add(b, a)
            assert f.mul(a, b) == f.mul(b, a)
            assert f.sub(f.add(a, b), b) == a
            if b:
                assert f.mul(f.div(a, b), b) == a


@pytest.mark.parametrize("p,e", [(2, 1), (3, 1), (2, 2), (5, 1), (2, 3), (7, 1), (3, 2)])
def test_frobenius_additivity_exhaustive(p, e):
    # (a+b)^p = a^p + b^p for every pair, fields up to size 64
    f = make_field(p, e)
    assert f.q <= 64
    for a in f.elements():
        for b in f.elements():
            assert f.pow(f.add(a, b), p) == f.add(f.pow(a, p), f.pow(b, p))


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8, 9, 16, 25, 27, 49, 64, 81, 121, 128, 256])
def test_unit_group_order(q):
    f = field_of_size(q)
    for a in range(1, q):
        assert f.pow(a, q - 1) == 1


def test_element_wrapper_and_arith():
    f4 = make_field(2, 2)
    w = f4.element(2)
    assert int(arith(w, w + 1, "mul")) == 1
    assert int(arith(w, w, "add")) == 0
    assert int(frobenius(w, 1)) == 3
    with pytest.raises(ZeroDivisionError):
        arith(w, f4.zero(), "div")
    f9 = make_field(3, 2)
    with pytest.raises(DomainError):
        _ = w + f9.element(1)  # mixing fields


def test_division_by_zero():
    f3 = make_field(3, 1)
    with pytest.raises(ZeroDivisionError):
        f3.div(1, 0)


@given(st.sampled_from([2, 3, 4, 5, 7, 8, 9]), st.data())
def test_field_properties_random(q, data):
    f = field_of_size(q)
    a = data.draw(st.integers(0, q - 1))
    b = data.draw(st.integers(0, q - 1))
    c = data.draw(st.integers(0, q - 1))
    assert f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c))
    assert f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c))
    # Frobenius is multiplicative and additive
    assert f.frobenius(f.mul(a, b), 1) == f.mul(f.frobenius(a, 1), f.frobenius(b, 1))
    assert f.frobenius(f.add(a, b), 1) == f.add(f.frobenius(a, 1), f.frobenius(b, 1))


def test_serialization_is_the_code():
    f8 = field_of_size(8)
    for a in f8.elements():
        assert int(f8.element(a)) == a
        assert f8.coeffs(a) == tuple((a >> i) & 1 for i in range(3))
