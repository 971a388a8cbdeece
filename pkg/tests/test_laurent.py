from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from khdetect.laurent import ONE, T_HALF, ZERO, LaurentPoly, NotDivisible

polys = st.dictionaries(st.integers(-8, 8), st.integers(-5, 5), max_size=5).map(LaurentPoly)
nonzero = polys.filter(lambda p: not p.is_zero())

T_2_T = LaurentPoly({2: 1, 0: -2, -2: 1})


def test_square_of_half_difference():
    assert (T_HALF - T_HALF ** -1) ** 2 == T_2_T


def test_divide_by_itself():
    assert T_2_T.divide_exact(T_2_T) == ONE


def test_second_derivative_of_t_minus_2_plus_inverse():
    # p = t - 2 + 1/t: p'' = 2/t^3, so p''(1)/2 = 1
    assert T_2_T.second_derivative_at_1() / 2 == 1


def test_non_divisible_raises():
    with pytest.raises(NotDivisible):
        LaurentPoly({2: 1, -2: 1}).divide_exact(T_2_T)
    with pytest.raises(ZeroDivisionError):
        ONE.divide_exact(ZERO)


def test_monomial_and_formatting():
    assert LaurentPoly.monomial(Fraction(1, 2)) == T_HALF
    assert LaurentPoly.from_exponents({1: 1, 0: -2, -1: 1}) == T_2_T
    assert (T_HALF - T_HALF ** -1).format() == "t^(1/2) - t^(-1/2)"
    assert LaurentPoly({2: 1, -2: 1}).format("q") == "q + q^-1"
    assert ZERO.format() == "0"
    with pytest.raises(ValueError):
        LaurentPoly.monomial(Fraction(1, 3))


def test_symmetrized_normalization():
    hopf = LaurentPoly({2: 1, 0: -1})            # t - 1
    assert hopf.symmetrized() == T_HALF - T_HALF ** -1
    assert (-hopf).symmetrized() == T_HALF - T_HALF ** -1
    trefoil = LaurentPoly({4: -1, 2: 1, 0: -1})  # -(t^2 - t + 1)
    assert trefoil.symmetrized() == LaurentPoly({2: 1, 0: -1, -2: 1})
    with pytest.raises(ValueError):
        LaurentPoly({2: 1, 0: 2}).symmetrized()


def test_at_minus_one():
    # t^(1/2) - t^(-1/2) at t = -1 with t^(1/2) = i is 2i
    assert (T_HALF - T_HALF ** -1).at_minus_one() == (0, 2)


@given(polys, nonzero)
def test_divide_exact_inverts_multiplication(a, b):
    assert (a * b).divide_exact(b) == a


@given(polys, nonzero)
def test_divmod_identity(a, b):
    q, r = a.divmod_exact(b)
    assert q * b + r == a


@given(polys, polys, polys)
def test_ring_axioms(a, b, c):
    assert a * (b + c) == a * b + a * c
    assert (a * b) * c == a * (b * c)
    assert a + b - b == a


@given(polys)
def test_json_round_trip(p):
    assert LaurentPoly.from_json(p.to_json()) == p
    assert p.substitute_inverse().substitute_inverse() == p
