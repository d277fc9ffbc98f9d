"""Special-function checks against independent oracles."""

import math

import mpmath
import pytest
from scipy.special import iv

from telemax import (
    CapacityError,
    DomainError,
    SeriesConfig,
    SeriesTruncationError,
    bessel_i,
    bessel_series_scaled,
    binomial,
    log_gamma,
)


def product_binomial(n: int, j: int) -> int:
    # independent multiplicative route: prod (n-k+i)/i
    if j < 0 or j > n:
        return 0
    out = 1
    for i in range(1, j + 1):
        out = out * (n - j + i) // i
    return out


class TestBinomial:
    def test_small_pascal(self):
        assert binomial(4, 2) == 6

    def test_out_of_range_is_zero(self):
        assert binomial(2, -1) == 0
        assert binomial(2, 3) == 0

    def test_against_product_formula(self):
        assert binomial(52, 26) == product_binomial(52, 26)

    @pytest.mark.parametrize("n", range(0, 65))
    def test_row_sum_is_power_of_two(self, n):
        assert sum(binomial(n, j) for j in range(n + 1)) == 2 ** n

    def test_capacity_error_beyond_supported_n(self):
        with pytest.raises(CapacityError):
            binomial(65, 3)

    def test_negative_n_rejected(self):
        with pytest.raises(DomainError):
            binomial(-1, 0)


class TestBesselI:
    def test_order_zero_at_origin(self):
        assert bessel_i(0, 0.0).value == 1.0

    @pytest.mark.parametrize("r", [1, 2, 5])
    def test_positive_order_at_origin(self, r):
        assert bessel_i(r, 0.0).value == 0.0

    def test_against_extended_precision_brute_force(self):
        # 200-term summation at 50 digits as the independent route
        with mpmath.workdps(50):
            brute = sum(mpmath.mpf(0.5) ** (2 * j) / (mpmath.factorial(j) ** 2)
                        for j in range(200))
            expected = float(brute)
        got = bessel_i(0, 1.0)
        assert abs(got.value - expected) <= got.tail_bound + 1e-15

    @pytest.mark.parametrize("x", [0.1, 0.7, 2.0, 9.5, 20.0])
    @pytest.mark.parametrize("r", [0, 1, 3, 7, 10])
    def test_against_scipy(self, r, x):
        got = bessel_i(r, x)
        reference = float(iv(r, x))
        assert abs(got.value - reference) <= got.tail_bound + 1e-13 * abs(reference)

    @pytest.mark.parametrize("x", [0.1, 1.0, 5.0, 12.5, 20.0])
    @pytest.mark.parametrize("r", range(1, 11))
    def test_three_term_recurrence(self, r, x):
        # 1e-9 relative to the scale: values reach ~1e7 at x = 20, where an
        # absolute 1e-9 would sit below one ulp
        lhs = bessel_i(r - 1, x).value - bessel_i(r + 1, x).value
        rhs = 2 * r / x * bessel_i(r, x).value
        assert abs(lhs - rhs) <= 1e-9 * max(1.0, abs(rhs))

    @pytest.mark.parametrize("x", [0.5, 2.0, 8.0])
    def test_generating_function_identity(self, x):
        # e^{-x} (I_0 + 2 sum_r I_r) -> 1
        cfg = SeriesConfig(tail_tolerance=1e-14)
        total = bessel_i(0, x, cfg).value
        for r in range(1, 80):
            term = bessel_i(r, x, cfg).value
            total += 2.0 * term
            if term < 1e-18:
                break
        assert math.exp(-x) * total == pytest.approx(1.0, abs=1e-12)

    def test_truncation_signals_not_silent(self):
        with pytest.raises(SeriesTruncationError):
            bessel_i(0, 30.0, SeriesConfig(tail_tolerance=1e-30, max_terms=3))

    def test_reported_bound_covers_truth(self):
        cfg = SeriesConfig(tail_tolerance=1e-6, max_terms=10_000)
        got = bessel_i(0, 6.0, cfg)
        assert abs(got.value - float(iv(0, 6.0))) <= got.tail_bound

    def test_negative_argument_rejected(self):
        with pytest.raises(DomainError):
            bessel_i(0, -1.0)


class TestScaledSeries:
    def test_matches_unscaled_for_positive_w(self):
        a, w = 0.8, 2.3
        got = bessel_series_scaled(3, a, w)
        expected = float(iv(3, 2 * a * math.sqrt(w))) / w ** 1.5
        assert got.value == pytest.approx(expected, rel=1e-12)

    def test_finite_at_w_zero(self):
        assert bessel_series_scaled(2, 0.7, 0.0).value == pytest.approx(
            0.7 ** 2 / 2.0, rel=1e-15)


class TestLogGamma:
    def test_at_one(self):
        assert log_gamma(1.0) == 0.0

    def test_at_half(self):
        assert log_gamma(0.5) == pytest.approx(math.log(math.sqrt(math.pi)),
                                               rel=1e-14)

    def test_recursion_oracle_from_tabulated_anchor(self):
        # Gamma(1.3) anchor, then Gamma(x+1) = x Gamma(x) up to 7.3
        anchor = 0.8974706963062772  # Gamma(1.3)
        value = anchor
        for i in range(6):
            value *= 1.3 + i
        assert log_gamma(7.3) == pytest.approx(math.log(value), rel=1e-12)

    @pytest.mark.parametrize("x", [0.5, 0.9, 1.0, 2.0, 3.7, 10.5, 47.0, 100.0])
    def test_relative_error_on_working_range(self, x):
        with mpmath.workdps(40):
            expected = float(mpmath.loggamma(x))
        if expected == 0.0:
            assert log_gamma(x) == 0.0
        else:
            assert log_gamma(x) == pytest.approx(expected, rel=1e-12)

    def test_domain_error(self):
        with pytest.raises(DomainError):
            log_gamma(0.0)
