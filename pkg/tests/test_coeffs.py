import subprocess
import sys
from fractions import Fraction as F

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hermite_bounds.coeffs import (
    RationalPoly,
    a_poly,
    coefficient_record,
    d_coeff,
    eval_a_imag_arg,
    eval_a_real,
    gamma_half,
    p_polys,
    q_polys,
)
from hermite_bounds.highprec import BigReal

ONE_PLUS_T = RationalPoly((1, 1))

PUBLISHED_A = {
    1: ((1, 5, -5), 24),
    2: ((-143, 298, 231, -770, 385), 1152),
    3: ((-6187, -240549, 750468, -334565, -1021020, 1276275, -425425), 414720),
}

PUBLISHED_D = {
    1: F(1), 2: F(0), 3: F(-3, 20), 4: F(1, 6),
    5: F(-9, 70), 6: F(3, 40), 7: F(-199, 7200), 8: F(-3, 700),
}


@pytest.mark.parametrize("j", sorted(PUBLISHED_A))
def test_a_matches_published_factored_form(j):
    inner, den = PUBLISHED_A[j]
    expected = ONE_PLUS_T ** j * RationalPoly(inner).scale(F(1, den))
    assert a_poly(j) == expected


def test_a_zero_is_one():
    assert a_poly(0) == RationalPoly.constant(1)


@pytest.mark.parametrize("j, value", sorted(PUBLISHED_D.items()))
def test_d_matches_published(j, value):
    assert d_coeff(j).value == value


def test_p_and_q_low_orders():
    assert p_polys(1) == (RationalPoly.constant(1), RationalPoly((1, F(-2, 3))))
    assert q_polys(2) == (RationalPoly.constant(1), RationalPoly((1, F(-3, 2))))


@pytest.mark.parametrize("j", range(13))
def test_degrees(j):
    assert p_polys(j)[j].degree == j
    if j >= 1:
        assert q_polys(j)[-1].degree == j - 1
    assert a_poly(j).degree == 3 * j


@pytest.mark.parametrize("j", range(13))
def test_a_divisible_by_power_of_one_plus_t(j):
    quotient, remainder = a_poly(j).divmod(ONE_PLUS_T ** j)
    assert remainder.is_zero()
    assert quotient.degree == 2 * j
    assert all(isinstance(c, F) for c in a_poly(j).coefficients)


@pytest.mark.parametrize("j", range(1, 7))
@pytest.mark.parametrize("t", [F(1, 3), F(2), F(-1, 2)])
def test_a_against_quadrature_of_defining_integral(j, t):
    with mpmath.workdps(40):
        p2j = p_polys(2 * j)[2 * j]
        tt = mpmath.mpf(t.numerator) / t.denominator
        coeffs = [mpmath.mpf(c.numerator) / c.denominator for c in p2j.coefficients]
        integrand = lambda s: mpmath.exp(-s) * s ** (j - mpmath.mpf(1) / 2) * mpmath.polyval(coeffs[::-1], (1 + tt) * s)
        ref = (-1) ** j / mpmath.sqrt(mpmath.pi) * ((1 + tt) / 2) ** j * mpmath.quad(integrand, [0, 10, 40, mpmath.inf])
        got = mpmath.mpf(a_poly(j)(t).numerator) / a_poly(j)(t).denominator
        assert abs(got - ref) <= mpmath.mpf(10) ** -30 * max(1, abs(ref))


@pytest.mark.parametrize("j", range(1, 13))
def test_d_against_quadrature_of_defining_integral(j):
    with mpmath.workdps(40):
        qj = q_polys(j)[-1]
        coeffs = [mpmath.mpf(c.numerator) / c.denominator for c in qj.coefficients]
        a = mpmath.mpf(j) / 3
        # s = u^3 removes the s^(j/3 - 1) endpoint singularity
        integrand = lambda u: 3 * mpmath.exp(-u ** 3) * u ** (j - 1) * mpmath.polyval(coeffs[::-1], u ** 3)
        ref = (-1) ** (j - 1) / mpmath.gamma(a) * mpmath.quad(integrand, [0, 1, 2, 4, mpmath.inf])
        got = d_coeff(j).value
        assert abs(mpmath.mpf(got.numerator) / got.denominator - ref) <= mpmath.mpf(10) ** -25


@pytest.mark.parametrize("k", range(1, 9))
def test_d_multiple_of_three_with_reversed_rising_factorial(k):
    j = 3 * k
    a = F(j, 3)
    total = F(0)
    for m, c in enumerate(q_polys(j)[-1].coefficients):
        rising = F(1)
        for i in reversed(range(m)):
            rising *= a + i
        total += c * rising
    assert d_coeff(j).value == (-1) ** (j - 1) * total


def test_d_rational_up_to_24():
    assert all(isinstance(d_coeff(j).value, F) for j in range(1, 25))


@pytest.mark.parametrize("j, expected", [(0, F(1)), (1, F(1, 2)), (5, F(945, 32))])
def test_gamma_half(j, expected):
    assert gamma_half(j).rational_part == expected


def test_gamma_half_functional_equation():
    for j in range(30):
        assert gamma_half(j + 1).rational_part == (j + F(1, 2)) * gamma_half(j).rational_part


def test_gamma_half_rejects_negative():
    with pytest.raises(ValueError):
        gamma_half(-1)


def test_eval_examples():
    assert eval_a_real(0, BigReal.of("0.37")).value == 1
    twelfth = eval_a_real(1, BigReal.of(1))
    assert abs(twelfth - F(1, 12)) < BigReal.of(2) ** -380
    z = eval_a_imag_arg(1, BigReal.of(0))
    assert z.re.value == BigReal.of(1).value / 24 and z.im.value == 0


@pytest.mark.parametrize("j", range(5))
def test_imaginary_argument_matches_complex_horner(j):
    c = F(3, 7)
    with mpmath.workprec(200):
        acc = mpmath.mpc(0)
        for coef in reversed(a_poly(j).coefficients):
            acc = acc * mpmath.mpc(0, mpmath.mpf(3) / 7) + mpmath.mpf(coef.numerator) / coef.denominator
        z = eval_a_imag_arg(j, BigReal.of(c, 200))
        assert abs(z.re.value - acc.real) < mpmath.mpf(2) ** -190
        assert abs(z.im.value - acc.imag) < mpmath.mpf(2) ** -190


def test_cold_generation_up_to_sixteen_is_fast():
    code = (
        "import time; t=time.perf_counter();"
        "from hermite_bounds.coeffs import a_poly, d_coeff;"
        "[a_poly(j) for j in range(17)]; [d_coeff(j) for j in range(1, 17)];"
        "print(time.perf_counter()-t)"
    )
    elapsed = float(subprocess.run([sys.executable, "-c", code], capture_output=True, text=True, check=True).stdout)
    assert elapsed < 1.0


def test_generation_is_deterministic():
    code = "from hermite_bounds.coeffs import a_poly, d_coeff; print(a_poly(9), d_coeff(20))"
    runs = {subprocess.run([sys.executable, "-c", code], capture_output=True, text=True, check=True).stdout for _ in range(2)}
    assert len(runs) == 1


def test_coefficient_record_layout():
    rec = coefficient_record("A", 1)
    assert rec == {"family": "A", "j": 1, "coefficients": [["1", "24"], ["1", "4"], ["0", "1"], ["-5", "24"]]}
    assert coefficient_record("D", 3)["coefficients"] == [["-3", "20"]]
    with pytest.raises(ValueError):
        coefficient_record("Z", 1)


def test_polynomial_trims_and_compares():
    assert RationalPoly((1, 2, 0, 0)) == RationalPoly((1, 2))
    assert RationalPoly(()).is_zero()
    with pytest.raises(ZeroDivisionError):
        RationalPoly((1,)).divmod(RationalPoly((0,)))


polys = st.lists(st.fractions(max_denominator=50, min_value=-20, max_value=20), min_size=1, max_size=6).map(RationalPoly)
points = st.fractions(max_denominator=20, min_value=-5, max_value=5)


@settings(max_examples=80, deadline=None)
@given(polys, polys, points)
def test_ring_operations_commute_with_evaluation(a, b, t):
    assert (a + b)(t) == a(t) + b(t)
    assert (a - b)(t) == a(t) - b(t)
    assert (a * b)(t) == a(t) * b(t)


@settings(max_examples=80, deadline=None)
@given(polys)
def test_integral_then_derivative_is_identity(a):
    assert a.integral().derivative() == a
    assert a.integral()(0) == 0


@settings(max_examples=80, deadline=None)
@given(polys, polys)
def test_division_reconstructs(a, b):
    if b.is_zero():
        return
    q, r = a.divmod(b)
    assert q * b + r == a
    assert r.is_zero() or r.degree < b.degree
