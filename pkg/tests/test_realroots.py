from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from sareg.algebra import InputError
from sareg.realroots import RealAlgebraic, compare, count_roots, isolate_roots, peval

X = sympy.Symbol("x")


def sympy_roots(coeffs):
    poly = sympy.Poly([sympy.Rational(str(c)) for c in reversed(coeffs)], X)
    return sorted(set(sympy.real_roots(poly)), key=lambda r: float(r))


def test_x2_minus_1():
    roots = isolate_roots([-1, 0, 1])
    assert [r.value for r in roots] == [-1, 1]


def test_x2_minus_2_refines_into_stated_windows():
    neg, pos = isolate_roots([-2, 0, 1])
    assert not neg.is_rational and not pos.is_rational
    for r in (neg, pos):
        r.refine_to(Fraction(1, 6))
    assert Fraction(-3, 2) <= neg.lo and neg.hi <= Fraction(-4, 3)
    assert Fraction(4, 3) <= pos.lo and pos.hi <= Fraction(3, 2)


def test_x2_plus_1_has_none():
    assert isolate_roots([1, 0, 1]) == []


def test_zero_polynomial_rejected():
    with pytest.raises(InputError):
        isolate_roots([0, 0])


def test_rational_roots_exact():
    roots = isolate_roots([-1, 3])  # 3x - 1
    assert roots[0].value == Fraction(1, 3)
    # (2x - 1)^2 (x + 3) has a double rational root
    p = [3, -11, 8, 4]  # expand (4x^2 - 4x + 1)(x + 3) = 4x^3 + 8x^2 - 11x + 3
    assert [r.value for r in isolate_roots(p)] == [-3, Fraction(1, 2)]


def test_compare_equal_irrationals_from_different_polys():
    (a,) = [r for r in isolate_roots([-2, 0, 1]) if r.lo > 0]
    (b,) = [r for r in isolate_roots([-8, 0, 4]) if r.lo > 0]
    assert compare(a, b) == 0
    (c,) = [r for r in isolate_roots([-3, 0, 1]) if r.lo > 0]
    assert compare(a, c) == -1 and compare(c, a) == 1


def test_sign_of_at_sqrt2():
    (r,) = [r for r in isolate_roots([-2, 0, 1]) if r.lo > 0]
    assert r.sign_of([-3, 0, 1]) == -1
    assert r.sign_of([-1, 0, 1]) == 1
    assert r.sign_of([-2, 0, 1]) == 0
    assert r.sign_of([0, -2, 0, 1]) == 0  # x^3 - 2x


coeff = st.integers(-9, 9)


@given(st.lists(coeff, min_size=2, max_size=6).filter(lambda c: c[-1] != 0))
def test_isolation_matches_sympy(coeffs):
    ours = isolate_roots(coeffs)
    ref = sympy_roots(coeffs)
    assert len(ours) == len(ref)
    for r, s in zip(ours, ref):
        if r.is_rational:
            assert sympy.Rational(str(r.value)) == s
        else:
            assert sympy.Rational(str(r.lo)) < s < sympy.Rational(str(r.hi))
            assert not s.is_rational
    # intervals disjoint and ordered
    for a, b in zip(ours, ours[1:]):
        assert compare(a, b) == -1


@given(st.lists(coeff, min_size=2, max_size=5).filter(lambda c: c[-1] != 0), st.integers(1, 30))
def test_refinement_reaches_any_width(coeffs, k):
    for r in isolate_roots(coeffs):
        r.refine_to(Fraction(1, 2**k))
        assert r.is_rational or r.hi - r.lo <= Fraction(1, 2**k)
        if not r.is_rational:
            assert peval(r.poly, r.lo) * peval(r.poly, r.hi) < 0


@given(
    st.lists(coeff, min_size=2, max_size=5).filter(lambda c: c[-1] != 0),
    st.lists(coeff, min_size=1, max_size=4),
)
def test_sign_of_matches_sympy(p, q):
    for r, s in zip(isolate_roots(p), sympy_roots(p)):
        qs = sympy.simplify(sum(c * s**k for k, c in enumerate(q)))
        expected = 0 if qs == 0 else int(sympy.sign(sympy.N(qs, 60)))
        assert r.sign_of(q) == expected


def test_count_roots_half_open():
    p = [-1, 0, 1]
    assert count_roots(p, -1, 1) == 1  # (-1, 1] holds only 1
    assert count_roots(p, -2, 1) == 2


def test_cmp_rational():
    r = RealAlgebraic.rational(Fraction(1, 3))
    assert r.cmp_rational(0) == 1 and r.cmp_rational(Fraction(1, 3)) == 0
