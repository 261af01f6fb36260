import json
from fractions import Fraction
from math import comb

import mpmath
import pytest
from hypothesis import given, strategies as st

from riffleguess.asym import (
    INV_PI,
    ONE,
    SQRT_2_OVER_PI,
    AsymSeries,
    SymCoeff,
    central_binomial_series,
    central_moment_series,
    log_factorial_series,
    moment_series,
    series_from_two_term_recurrence,
    skewness_limit,
    solve_parity_step2,
)
from riffleguess.errors import SeriesError
from riffleguess.genfun import D_deriv_at1, exact_moments

F = Fraction
S2P = SQRT_2_OVER_PI


def sym(*pairs):
    """sym((c, a, b), ...) = sum c 2^(a/2) pi^(-b/2)."""
    out = SymCoeff()
    for c, a, b in pairs:
        out = out + SymCoeff({(a, b): F(c)})
    return out


coeffs = st.builds(
    lambda items: SymCoeff({(a, b): F(n, d) for a, b, n, d in items}),
    st.lists(
        st.tuples(st.integers(-3, 3), st.integers(-2, 4), st.integers(-9, 9), st.integers(1, 9)),
        max_size=4,
    ),
)


class TestSymCoeff:
    def test_normalization(self):
        assert SymCoeff({(2, 0): 1}) == SymCoeff.coerce(2)
        assert SymCoeff({(3, 1): 1}) == SymCoeff({(1, 1): 2})
        assert SymCoeff({(1, 0): 0}) == SymCoeff()

    def test_constants(self):
        assert S2P * S2P == INV_PI * 2
        assert float(S2P) == pytest.approx((2 / mpmath.pi) ** 0.5)
        sqrt_2pi = SymCoeff({(1, -1): 1})
        assert sqrt_2pi * S2P == SymCoeff.coerce(2)

    def test_str(self):
        assert str(S2P) == "sqrt(2/pi)"
        assert str(SymCoeff({(0, 2): F(11, 12)})) == "(11/12)/pi"

    def test_rational(self):
        assert SymCoeff.coerce(F(3, 4)).rational() == F(3, 4)
        with pytest.raises(SeriesError):
            S2P.rational()

    @given(coeffs, coeffs, coeffs)
    def test_ring_laws(self, x, y, z):
        assert x + y == y + x
        assert x * y == y * x
        assert (x + y) + z == x + (y + z)
        assert (x * y) * z == x * (y * z)
        assert x * (y + z) == x * y + x * z
        assert (x + y) * (x + y) == x * x + y * y + (x * y) * 2
        assert x - x == SymCoeff()
        assert x * ONE == x

    @given(coeffs, coeffs)
    def test_evaluation_is_a_homomorphism(self, x, y):
        with mpmath.workprec(120):
            assert mpmath.almosteq((x * y).evaluate(120), x.evaluate(120) * y.evaluate(120), 1e-25)
            assert mpmath.almosteq((x + y).evaluate(120), x.evaluate(120) + y.evaluate(120), 1e-25)


class TestSeriesArithmetic:
    def test_add_zero(self):
        s = AsymSeries({2: 1, -1: F(1, 3)}, cutoff=-4)
        assert s + 0 == s

    def test_half_powers_cancel(self):
        a = AsymSeries({1: 1})
        b = AsymSeries({-1: 1})
        assert a * b == AsymSeries({0: 1})

    def test_difference_of_squares(self):
        a = AsymSeries.from_order({0: 1, -2: F(-1, 8)}, 4)
        b = AsymSeries.from_order({0: 1, -2: F(1, 8)}, 4)
        prod = a * b
        assert prod.terms == {0: ONE, -4: SymCoeff.coerce(F(-1, 64))}
        assert prod.order == 4

    def test_prefactor_rules(self):
        p = AsymSeries({0: 1}, None, True)
        with pytest.raises(SeriesError):
            p * p
        with pytest.raises(SeriesError):
            p + AsymSeries({0: 1})
        assert (p * AsymSeries({2: 3})).pow2

    def test_shift_polynomial_exact(self):
        s = AsymSeries.polynomial([0, 0, 1])  # n^2
        assert s.shift(-2) == AsymSeries.polynomial([4, -4, 1])

    def test_shift_half_power(self):
        s = AsymSeries({1: 1}).shift(1, K=3)
        n = 1000
        assert float(s.evaluate(n)) == pytest.approx((n + 1) ** 0.5, rel=1e-12)

    def test_pretty_and_json(self):
        s = moment_series(1, "odd", 2)
        assert s.pretty().startswith("1/2*n + sqrt(2/pi)*n^(1/2) - 1/2")
        rows = s.to_json_terms()
        assert {"pow2": 1, "powInvPi": 1, "nHalfPow": 1, "coef": "1/1"} in rows
        again = AsymSeries.from_dict(json.loads(s.to_json()))
        assert again == s


class TestLogFactorial:
    def test_terms(self):
        s = log_factorial_series(4)
        assert s.coefficient(-2).rational() == F(1, 12)
        assert s.coefficient(-6).rational() == F(-1, 360)
        assert s.coefficient(-10).rational() == F(1, 1260)

    def test_only_odd_powers(self):
        s = log_factorial_series(9)
        assert all((p // 2) % 2 == 1 and p % 2 == 0 for p in s.terms)

    def test_against_lgamma(self):
        s = log_factorial_series(6)
        with mpmath.workprec(200):
            n = mpmath.mpf(50)
            exact = mpmath.loggamma(n + 1) - (mpmath.log(2 * mpmath.pi) / 2 + (n + 0.5) * mpmath.log(n) - n)
            assert abs(s.evaluate(50, 200) - exact) < mpmath.mpf(50) ** -8


class TestCentralBinomial:
    def test_coefficients(self):
        s = central_binomial_series(4)
        got = [s.coefficient(-2 * j).rational() for j in range(5)]
        assert got == [1, F(-1, 8), F(1, 128), F(5, 1024), F(-21, 32768)]

    def test_recurrence_route_agrees(self):
        for K in (4, 6):
            a = series_from_two_term_recurrence([2, 4], [-1, -1], K)
            assert a == central_binomial_series(K)

    @pytest.mark.parametrize("K", [2, 3, 4])
    def test_residual(self, K):
        n = 1000
        with mpmath.workprec(200):
            exact = mpmath.mpf(comb(2 * n, n)) * mpmath.sqrt(mpmath.pi * n) / mpmath.mpf(4) ** n
            err = abs(exact - central_binomial_series(K).evaluate(n, 200))
            nxt = abs(central_binomial_series(K + 1).coefficient(-2 * (K + 1)).evaluate()) / mpmath.mpf(n) ** (K + 1)
            assert err < 2 * nxt

    def test_inconsistent_ansatz(self):
        # 2 f(n) - f(n+1) = 0 has no 4^n solution
        with pytest.raises(SeriesError):
            series_from_two_term_recurrence([2], [-1], 3)


class TestParityStep:
    def test_geometric(self):
        f = solve_parity_step2(AsymSeries({0: 1}, None, True), "even", 4)
        assert f == AsymSeries({0: F(4, 3)}, None, True)

    def test_polynomial_rhs(self):
        rhs = AsymSeries.polynomial([1, 2, 3], pow2=True)
        f = solve_parity_step2(rhs, "odd", 4)
        assert f.is_exact
        assert f - f.shift(-2) == rhs

    @pytest.mark.parametrize("K", [3, 6])
    def test_recurrence_cancels(self, K):
        rhs = AsymSeries({3: S2P, 1: F(-1, 2), 0: 1, -1: SymCoeff({(0, 2): 1})}, cutoff=-2 * K, pow2=True)
        f = solve_parity_step2(rhs, "even", K)
        residual = f - f.shift(-2, K) - rhs
        assert residual.terms == {}
        assert residual.order == K

    def test_remainder_flag(self):
        rhs = AsymSeries({0: 1}, None, True)
        f = solve_parity_step2(rhs, "even", 3, remainder=AsymSeries.polynomial([2]))
        assert f.dropped_remainder

    def test_bad_parity(self):
        with pytest.raises(ValueError):
            solve_parity_step2(AsymSeries({0: 1}, None, True), "both", 3)


def tail(series, start, count):
    """Coefficients of sqrt(2/pi) n^((start - 2j)/2), j = 0..count-1."""
    out = []
    for j in range(count):
        terms = series.coefficient(start - 2 * j).terms
        assert set(terms) <= {(1, 1)}
        out.append(terms.get((1, 1), F(0)))
    return out


class TestMoments:
    def test_first_moment_odd(self):
        s = moment_series(1, "odd", 5)
        assert s.coeff_at(1) == F(1, 2)
        assert s.coeff_at(F(1, 2)) == S2P
        assert s.coeff_at(0) == F(-1, 2)
        assert tail(s, -1, 5) == [F(-3, 4), F(-53, 96), F(-443, 384), F(-75949, 18432), F(-4621519, 221184)]

    def test_first_moment_even(self):
        s = moment_series(1, "even", 5)
        assert tail(s, -1, 5) == [F(-3, 4), F(-49, 96), F(-439, 384), F(-76709, 18432), F(-4628519, 221184)]

    def test_first_moment_prefactor_form(self):
        d = moment_series(1, "odd", 5)
        # (n - 1) 2^(n-1) polynomial part
        assert d.coeff_at(1) == F(1, 2) and d.coeff_at(0) == F(-1, 2)

    @pytest.mark.parametrize(
        "parity,tails",
        [("odd", [F(-11, 4), F(-5, 96), F(-1753, 1152), F(-13733, 2048)]),
         ("even", [F(-11, 4), F(-1, 96), F(-1901, 1152), F(-13917, 2048)])],
    )
    def test_second_factorial(self, parity, tails):
        s = moment_series(2, parity, 3)
        assert s.coeff_at(2) == F(1, 4)
        assert s.coeff_at(F(3, 2)) == S2P
        assert s.coeff_at(1) == F(-1, 4)
        assert s.coeff_at(0) == 0
        assert tail(s, 1, 4) == tails

    @pytest.mark.parametrize(
        "parity,tails",
        [("odd", [F(763, 128), F(-2681, 1536), F(-443239, 73728)]),
         ("even", [F(767, 128), F(-3085, 1536), F(-413903, 73728)])],
    )
    def test_third_factorial(self, parity, tails):
        s = moment_series(3, parity, 2)
        assert s.coeff_at(3) == F(1, 8)
        assert s.coeff_at(F(5, 2)) == S2P * F(3, 4)
        assert s.coeff_at(2) == 0
        assert s.coeff_at(F(3, 2)) == S2P * F(-65, 16)
        assert s.coeff_at(1) == F(-13, 8)
        assert tail(s, 1, 3) == tails

    def test_variance_even(self):
        m2 = central_moment_series(2, "even", 1)
        assert m2.terms == {
            2: sym((F(3, 4), 0, 0), (-2, 0, 2)),
            0: sym((F(-3, 4), 0, 0), (3, 0, 2)),
            -1: -S2P,
            -2: sym((F(11, 12), 0, 2)),
        }

    def test_third_central_even(self):
        m3 = central_moment_series(3, "even", F(1, 2))
        sqrt_2pi = SymCoeff({(1, -1): 1})
        expected = {
            3: S2P * sym((4, 0, 2), (F(-5, 4), 0, 0)),
            1: S2P * sym((F(43, 16), 0, 0), (-9, 0, 2)),
            0: S2P * (sqrt_2pi * F(-3, 4) + S2P * 3),
            -1: -(S2P * sym((F(241, 128), 0, 0), (F(-5, 8), 0, 2))),
        }
        assert m3.terms == expected

    def test_first_central_vanishes(self):
        for parity in ("odd", "even"):
            assert central_moment_series(1, parity, 6).terms == {}

    def test_limits(self):
        with pytest.raises(ValueError):
            moment_series(5, "odd", 3)
        with pytest.raises(ValueError):
            moment_series(1, "neither", 3)


class TestAgainstExact:
    @pytest.mark.parametrize("n,parity", [(150, "even"), (151, "odd")])
    def test_convergence_in_K(self, n, parity):
        exact = mpmath.mpf(D_deriv_at1(1, n)) / mpmath.mpf(2) ** n
        errs = []
        for K in (3, 6, 9):
            approx = moment_series(1, parity, K).evaluate(n, 200)
            errs.append(abs(approx - exact) / exact)
        assert errs[0] > errs[1] > errs[2]
        assert errs[2] < 1e-6

    def test_variance_n200(self):
        exact = exact_moments(200, 2).variance
        approx = central_moment_series(2, "even", 3).evaluate(200, 100)
        rel = abs(approx - mpmath.mpf(exact.numerator) / exact.denominator) / (mpmath.mpf(exact.numerator) / exact.denominator)
        assert rel < 0.01

    def test_second_moment_parities(self):
        for n in (120, 121):
            parity = "odd" if n % 2 else "even"
            exact = mpmath.mpf(D_deriv_at1(2, n)) / mpmath.mpf(2) ** n
            approx = moment_series(2, parity, 6).evaluate(n, 200)
            assert abs(approx - exact) / exact < 1e-10


class TestSkewnessLimit:
    def test_symbolic_parts(self):
        lim = skewness_limit()
        assert lim.numerator == S2P * sym((4, 0, 2), (F(-5, 4), 0, 0))
        assert lim.denominator_base == sym((F(3, 4), 0, 0), (-2, 0, 2))

    def test_value(self):
        lim = skewness_limit()
        with mpmath.workprec(100):
            pi = mpmath.pi
            ref = mpmath.sqrt(2 / pi) * (4 / pi - mpmath.mpf(5) / 4) / (mpmath.mpf(3) / 4 - 2 / pi) ** 1.5
            assert mpmath.almosteq(lim.value, ref, 1e-25)
        assert float(lim) == pytest.approx(0.4857, abs=1e-4)

    def test_odd_agrees(self):
        assert skewness_limit("odd").numerator == skewness_limit("even").numerator
