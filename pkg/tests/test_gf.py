import pytest
from hypothesis import given, strategies as st

from tangotower import gf


@pytest.mark.parametrize("p,d", sorted(gf.CONWAY))
def test_table_polynomials_are_irreducible_and_primitive(p, d):
    poly = list(gf.CONWAY[(p, d)])
    assert gf.is_irreducible(poly, p)
    q = p**d
    # x has order exactly q - 1 modulo the polynomial
    for r in {r for r in range(2, q) if (q - 1) % r == 0 and all(r % s for s in range(2, r))}:
        assert gf.ppowmod([0, 1], (q - 1) // r, poly, p) != [1]


def test_reducible_polynomials_detected():
    assert not gf.is_irreducible([0, 0, 1], 3)  # x^2
    assert not gf.is_irreducible([1, 0, 1], 2)  # (x+1)^2
    assert gf.is_irreducible([1, 1], 2)


def test_irreducible_poly_outside_table():
    poly = gf.irreducible_poly(11, 2)
    assert len(poly) == 3 and gf.is_irreducible(list(poly), 11)


@pytest.mark.parametrize("p,d", [(2, 3), (3, 2), (5, 2), (7, 1)])
def test_field_axioms_exhaustive(p, d):
    F = gf.field(p, d)
    els = list(F.elements())
    for a in els:
        assert F.add(a, F.neg(a)) == 0
        if a:
            assert F.mul(a, F.pow(a, F.q - 2)) == 1
        assert F.frobenius(a, d) == a
    # p-fold sum of 1 vanishes
    acc = 0
    for _ in range(p):
        acc = F.add(acc, 1)
    assert acc == 0


@given(st.sampled_from([(2, 4), (3, 3), (5, 2)]), st.data())
def test_distributive(pd, data):
    F = gf.field(*pd)
    a, b, c = (data.draw(st.integers(0, F.q - 1)) for _ in range(3))
    assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    # Frobenius is additive
    assert F.frobenius(F.add(a, b)) == F.add(F.frobenius(a), F.frobenius(b))


def test_subfield_membership():
    F = gf.field(2, 6)
    sub2 = [a for a in F.elements() if F.in_subfield(a, 2)]
    sub3 = [a for a in F.elements() if F.in_subfield(a, 3)]
    assert len(sub2) == 4 and len(sub3) == 8


def test_polynomial_division_and_gcd():
    p = 5
    a = gf.pmul([1, 1], [2, 0, 1], p)
    q, r = gf.pdivmod(a, [1, 1], p)
    assert q == [2, 0, 1] and r == []
    assert gf.pgcd(a, [1, 1], p) == [1, 1]


def test_strip_small_degree_roots():
    p = 3
    cubic = list(gf.CONWAY[(3, 3)])
    quartic = list(gf.CONWAY[(3, 4)])
    poly = gf.pmul(gf.pmul([0, 1], [1, 1], p), gf.pmul(cubic, quartic, p), p)
    poly = gf.pmul(poly, [0, 1], p)  # a repeated root
    assert gf.strip_small_degree_roots(poly, p, 3) == quartic
    assert gf.strip_small_degree_roots(poly, p, 4) == [1]
