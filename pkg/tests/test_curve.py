import random

import pytest
from hypothesis import given, settings, strategies as st

from tangotower import curve
from tangotower.curve import ArtinSchreierCurve, CurveError, CurveFunction
from tangotower.tower import base_from_tango_curve

C35 = ArtinSchreierCurve(3, (0, 0, 0, 0, 0, 1))
C25 = ArtinSchreierCurve(2, (0, 0, 0, 0, 0, 1))


def fn(C, d):
    return CurveFunction.from_dict(C, d)


def test_genus_examples():
    assert C35.genus == 4 and C25.genus == 2
    assert ArtinSchreierCurve(2, (0, 0, 0, 1)).genus == 1


def test_genus_by_point_count_is_consistent():
    # Hasse-Weil over F_3: |#C(F_3) - 4| <= 2g sqrt(3) with the point at infinity
    n = len(curve.affine_points(C35, 1)) + 1
    assert abs(n - 4) <= 2 * C35.genus * 3**0.5


def test_bad_curves_rejected():
    with pytest.raises(CurveError):
        ArtinSchreierCurve(3, (0, 0, 0, 1))
    with pytest.raises(CurveError):
        ArtinSchreierCurve(4, (0, 1))
    with pytest.raises(CurveError):
        ArtinSchreierCurve.from_json({"p": 3, "f": [0, 1], "g": 0})


def test_differentials():
    x, y = CurveFunction.x(C35), CurveFunction.y(C35)
    assert curve.differential_of(C35, x) == CurveFunction.const(C35, 1)
    # d(y^p - y - f) = 0 gives dy = -f' dx
    assert curve.differential_of(C35, y) == fn(C35, {(4, 0): 1})
    assert curve.differential_of(C35, fn(C35, {(3, 0): 1})).is_zero


def test_reduction_uses_curve_equation():
    y = CurveFunction.y(C35)
    assert curve.fn_pow(C35, y, 3) == fn(C35, {(0, 1): 1, (5, 0): 1})


def test_valuations_at_infinity():
    assert curve.infinity_valuation(C35, CurveFunction.const(C35, 1), as_differential=True) == 6
    assert curve.infinity_valuation(C35, CurveFunction.x(C35)) == -3
    assert curve.infinity_valuation(C35, CurveFunction.y(C35)) == -5
    with pytest.raises(Exception):
        curve.infinity_valuation(C35, CurveFunction.const(C35, 0))


def test_valuation_matches_norm_degree():
    rng = random.Random(3)
    for _ in range(50):
        h = curve.random_eta(C35, 40, rng)
        assert -curve.infinity_valuation(C35, h) == len(curve.norm_to_x(C35, h)) - 1


def test_tango_examples():
    assert curve.is_tango(C35, 2) == CurveFunction.x(C35)
    assert curve.is_tango(C25, 1) == CurveFunction.x(C25)
    assert curve.is_tango(C35, 3) is None
    assert curve.is_tango(C25, 2) is None


def test_pre_tango_examples():
    assert curve.pre_tango_search(C35, 2, 30) is not None
    assert curve.pre_tango_search(C35, 1, 30) is not None
    assert curve.pre_tango_search(C35, 3, 45) is None


def test_tango_invariant_examples():
    b = curve.tango_invariant_bounds(C35)
    assert (b.lower, b.upper) == (2, 2) and b.exact
    b = curve.tango_invariant_bounds(C25)
    assert (b.lower, b.upper) == (1, 1)
    b = curve.tango_invariant_bounds(ArtinSchreierCurve(5, (0, 0, 0, 0, 1)))
    assert b.upper == 2 and b.lower == 2
    with pytest.raises(CurveError):
        curve.tango_invariant_bounds(ArtinSchreierCurve(2, (0, 0, 0, 1)))


def test_raynaud_family():
    C = curve.raynaud_family(3, 2)
    assert C.m == 5 and C.genus == 4 and curve.raynaud_degree(3, 2) == 2
    C = curve.raynaud_family(2, 3)
    assert C.m == 5 and C.genus == 2 and curve.raynaud_degree(2, 3) == 1
    with pytest.raises(CurveError):
        curve.raynaud_family(2, 1)


@pytest.mark.parametrize("p,ell", [(2, 3), (2, 4), (3, 2), (3, 3), (5, 1), (5, 2), (7, 1)])
def test_raynaud_family_feeds_tango_base(p, ell):
    C = curve.raynaud_family(p, ell)
    degD = curve.raynaud_degree(p, ell)
    assert curve.is_tango(C, degD) is not None
    s = base_from_tango_curve(p, degD)
    assert s.canonical.d == C.canonical_degree
    b = curve.tango_invariant_bounds(C)
    assert b.exact and b.lower == degD


def test_brute_force_examples():
    one = CurveFunction.const(C35, 1)
    assert curve.brute_force_divisor_degree(C35, one, 1).degree == 0
    r = curve.brute_force_divisor_degree(C35, CurveFunction.x(C35), 1)
    assert r.degree == 3 and r.complete
    r = curve.brute_force_divisor_degree(C35, fn(C35, {(4, 0): 2}), 2)
    assert r.degree == 12 and r.complete


def test_brute_force_flags_unreached_zeros():
    # x^2 + 1 is irreducible over F_3, so the zeros of h lie over F_9
    h = fn(C35, {(2, 0): 1, (0, 0): 1})
    r = curve.brute_force_divisor_degree(C35, h, 1)
    assert not r.complete and r.degree == 0 and r.certified_degree == 6
    r = curve.brute_force_divisor_degree(C35, h, 2)
    assert r.complete and r.degree == 6


curves = st.sampled_from([ArtinSchreierCurve(p, (0,) * m + (1,))
                          for p in (2, 3, 5) for m in range(1, 8) if m % p])


@settings(max_examples=60, deadline=None)
@given(curves, st.randoms(use_true_random=False))
def test_degree_conservation(C, rnd):
    eta = curve.random_eta(C, 3 * C.p * C.m, rnd)
    h = curve.differential_of(C, eta)
    v = curve.infinity_valuation(C, h, as_differential=True)
    r = curve.brute_force_divisor_degree(C, h, 3)
    assert v + r.certified_degree == C.canonical_degree
    if r.complete:
        assert v + r.degree == C.canonical_degree


@settings(max_examples=40, deadline=None)
@given(curves, st.randoms(use_true_random=False))
def test_pth_powers_have_zero_differential(C, rnd):
    u = curve.random_eta(C, 2 * C.p * C.m, rnd)
    assert curve.differential_of(C, curve.pth_power(C, u)).is_zero


@pytest.mark.parametrize("p,m,W", [(3, 5, 45), (2, 5, 40), (5, 3, 60), (2, 3, 30)])
def test_differential_kernel_is_pth_powers(p, m, W):
    # kernel = {u^p}: u non-constant with weight <= W/p, monomial weights being distinct
    C = ArtinSchreierCurve(p, (0,) * m + (1,))
    count = sum(1 for b in range(p) for a in range(W + 1) if 0 < p * (p * a + m * b) <= W)
    assert curve.differential_kernel_dimension(C, W) == count


def test_bounds_are_ordered():
    for p in (2, 3, 5):
        for m in range(2, 8):
            if m % p == 0:
                continue
            C = ArtinSchreierCurve(p, (0,) * m + (1,))
            if C.genus < 2:
                continue
            b = curve.tango_invariant_bounds(C)
            assert 0 <= b.lower <= b.upper


def test_curve_function_json_and_text():
    h = fn(C35, {(2, 1): 2, (0, 0): 1, (7, 0): 1})
    assert CurveFunction.from_dict(C35, {(i, j): c for i, j, c in h.to_json()}) == h
    assert str(h) == "2*x^2*y + x^7 + 1"
