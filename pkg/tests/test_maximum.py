"""Maximum-law checks: frozen values, parity identities, oracles."""

import math
from fractions import Fraction

import numpy as np
import pytest
from scipy.integrate import quad
from scipy.special import iv

from telemax import (
    CapacityError,
    DomainError,
    MotionParams,
    SeriesConfig,
    a_triangle,
    max_cdf_minus_count,
    max_cdf_minus_unconditional,
    max_cdf_plus_count,
    max_cdf_plus_unconditional,
    max_pdf_minus_count,
    max_pdf_plus_count,
    max_point_mass_plus,
    minus_plus_cdf_gap,
    pdf_peak_minus_n3,
    pdf_peak_plus_n3,
    symmetric_cdf_generating_function,
    zero_mass_count,
    zero_mass_count_exact,
    zero_mass_count_from_triangle,
    zero_mass_unconditional,
)
from telemax.maximum import _plus_cdf_even, _plus_cdf_odd, _plus_cdf_terms

ASYM = MotionParams(2.0, 1.0, 1.0)


class TestPlusCdfCount:
    def test_single_reversal_is_linear(self):
        for p in (ASYM, MotionParams(0.7, 1.9)):
            t = 1.3
            assert max_cdf_plus_count(p, t, p.c1 * t / 2, 1).value == \
                pytest.approx(0.5, abs=1e-15)

    def test_two_reversals_frozen_value(self):
        # hand substitution: beta (beta (c1-c2) + 2 c1 c2 t) / ((c1+c2) c1^2 t^2)
        assert max_cdf_plus_count(ASYM, 1.0, 1.0, 2).value == \
            pytest.approx(5.0 / 12.0, abs=1e-15)

    @pytest.mark.parametrize("n", [1, 2, 3, 5, 8, 17])
    def test_support_endpoints(self, n):
        assert max_cdf_plus_count(ASYM, 1.0, 0.0, n).value == 0.0
        assert max_cdf_plus_count(ASYM, 1.0, 2.0, n).value == \
            pytest.approx(1.0, abs=1e-14)

    def test_three_reversals_closed_polynomial(self):
        # beta^3/(c1 t)^3 + 3 beta (c1 t - beta)(c2 t + beta)/((c1+c2) c1^2 t^3)
        c1, c2, t = 2.0, 1.0, 1.0
        for beta in np.linspace(0.0, 2.0, 9):
            direct = beta ** 3 / (c1 * t) ** 3 \
                + 3 * beta * (c1 * t - beta) * (c2 * t + beta) \
                / ((c1 + c2) * c1 ** 2 * t ** 3)
            assert max_cdf_plus_count(ASYM, t, beta, 3).value == \
                pytest.approx(direct, abs=1e-14)

    def test_parity_forms_agree_with_unified(self):
        rng = np.random.default_rng(7)
        for _ in range(100):
            p = MotionParams(rng.uniform(0.3, 3.0), rng.uniform(0.3, 3.0))
            t = rng.uniform(0.2, 2.5)
            beta = rng.uniform(0.0, 1.0) * p.c1 * t
            k = int(rng.integers(1, 9))
            even = _plus_cdf_even(p, t, beta, k)
            odd = _plus_cdf_odd(p, t, beta, k)
            assert abs(even - max_cdf_plus_count(p, t, beta, 2 * k).value) \
                <= 1e-14
            assert abs(odd - max_cdf_plus_count(p, t, beta, 2 * k + 1).value) \
                <= 1e-14

    def test_every_summand_nonnegative(self):
        rng = np.random.default_rng(11)
        for _ in range(50):
            p = MotionParams(rng.uniform(0.3, 3.0), rng.uniform(0.3, 3.0))
            t = rng.uniform(0.2, 2.0)
            beta = rng.uniform(0.0, 1.0) * p.c1 * t
            n = int(rng.integers(1, 15))
            assert all(term >= -1e-18 for term in
                       _plus_cdf_terms(p, t, beta, n))

    def test_independent_of_rate(self):
        quiet = MotionParams(2.0, 1.0, 0.0)
        busy = MotionParams(2.0, 1.0, 9.0)
        for beta in (0.3, 1.1):
            assert max_cdf_plus_count(quiet, 1.0, beta, 4).value == \
                max_cdf_plus_count(busy, 1.0, beta, 4).value

    def test_symmetric_cyclicity(self):
        p = MotionParams(1.4, 1.4)
        for k in (1, 2, 4):
            for beta in np.linspace(0.0, 1.4, 11):
                assert max_cdf_plus_count(p, 1.0, beta, 2 * k - 1).value == \
                    pytest.approx(
                        max_cdf_plus_count(p, 1.0, beta, 2 * k).value,
                        abs=1e-14)

    @pytest.mark.parametrize("n", [1, 2, 3, 6, 11])
    def test_monotone_in_beta(self, n):
        grid = np.linspace(0.0, 2.0, 1000)
        values = [max_cdf_plus_count(ASYM, 1.0, b, n).value for b in grid]
        assert all(b2 >= b1 - 1e-14 for b1, b2 in zip(values, values[1:]))

    def test_domain_and_capacity_errors(self):
        with pytest.raises(DomainError):
            max_cdf_plus_count(ASYM, 1.0, 2.5, 2)
        with pytest.raises(DomainError):
            max_cdf_plus_count(ASYM, 1.0, -0.1, 2)
        with pytest.raises(DomainError):
            max_cdf_plus_count(ASYM, 1.0, 0.5, 0)
        with pytest.raises(CapacityError):
            max_cdf_plus_count(ASYM, 1.0, 0.5, 65)


class TestPlusPdfCount:
    def test_symmetric_two_reversals_at_origin(self):
        p = MotionParams(1.0, 1.0)
        assert max_pdf_plus_count(p, 1.0, 0.0, 2).value == \
            pytest.approx(1.0, abs=1e-15)

    def test_three_reversals_at_origin(self):
        assert max_pdf_plus_count(ASYM, 1.0, 0.0, 3).value == \
            pytest.approx(0.5, abs=1e-15)

    def test_three_reversal_peak(self):
        peak = pdf_peak_plus_n3(ASYM, 1.0)
        assert peak.beta == pytest.approx(2.0 / 3.0, abs=1e-6)
        assert peak.density == pytest.approx(2.0 / 3.0, abs=1e-9)
        assert peak.matches == 0

    @pytest.mark.parametrize("n", [1, 2, 3, 4, 7, 10])
    def test_matches_cdf_derivative(self, n):
        h = 1e-6
        for beta in np.linspace(0.05, 0.95, 20) * 2.0:
            fd = (max_cdf_plus_count(ASYM, 1.0, beta + h, n).value
                  - max_cdf_plus_count(ASYM, 1.0, beta - h, n).value) / (2 * h)
            assert max_pdf_plus_count(ASYM, 1.0, beta, n).value == \
                pytest.approx(fd, abs=1e-6)

    @pytest.mark.parametrize("n", [1, 2, 3, 5, 8])
    def test_integrates_to_one(self, n):
        val, _ = quad(lambda b: max_pdf_plus_count(ASYM, 1.0, b, n).value,
                      0.0, 2.0, epsabs=1e-12, epsrel=1e-12, limit=200)
        assert val == pytest.approx(1.0, abs=1e-9)

    def test_nonnegative_on_support(self):
        for n in (1, 2, 3, 4, 9):
            for beta in np.linspace(0.0, 2.0, 400):
                assert max_pdf_plus_count(ASYM, 1.0, beta, n).value >= -1e-12


class TestMinusCdfCount:
    def test_full_support_reaches_one(self):
        for n in (1, 2, 3, 8):
            assert max_cdf_minus_count(ASYM, 1.0, 2.0, n).value == \
                pytest.approx(1.0, abs=1e-14)

    def test_single_reversal_at_zero_matches_atom(self):
        got = max_cdf_minus_count(ASYM, 1.0, 0.0, 1).value
        assert got == pytest.approx(1.0 / 3.0, abs=1e-15)
        assert got == pytest.approx(zero_mass_count(ASYM, 1).value, abs=1e-15)

    @pytest.mark.parametrize("n", [1, 2, 3, 4, 9])
    def test_cdf_at_zero_equals_atom(self, n):
        assert max_cdf_minus_count(ASYM, 1.0, 0.0, n).value == \
            pytest.approx(zero_mass_count(ASYM, n).value, abs=1e-14)

    def test_equal_speed_parity_differs_off_the_atom(self):
        # the atom is cyclic across 2k-1, 2k but the full CDFs are not
        p = MotionParams(1.0, 1.0)
        assert max_cdf_minus_count(p, 1.0, 0.4, 3).value != \
            pytest.approx(max_cdf_minus_count(p, 1.0, 0.4, 4).value, abs=1e-6)

    @pytest.mark.parametrize("n", [1, 2, 3, 6, 11])
    def test_monotone_in_beta(self, n):
        grid = np.linspace(0.0, 2.0, 1000)
        values = [max_cdf_minus_count(ASYM, 1.0, b, n).value for b in grid]
        assert all(b2 >= b1 - 1e-14 for b1, b2 in zip(values, values[1:]))


class TestMinusPdfCount:
    def test_three_reversals_at_origin(self):
        assert max_pdf_minus_count(ASYM, 1.0, 0.0, 3).value == \
            pytest.approx(5.0 / 9.0, abs=1e-15)

    def test_three_reversal_peak_selects_consistent_form(self):
        peak = pdf_peak_minus_n3(ASYM, 1.0)
        assert peak.beta == pytest.approx(2.0 / 7.0, abs=1e-6)
        assert peak.matches == 1
        # the other algebraic reduction lands elsewhere (2/3 here)
        assert abs(peak.candidates[0] - peak.beta) > 0.3

    @pytest.mark.parametrize("n", [1, 2, 3, 4, 7, 10])
    def test_matches_cdf_derivative(self, n):
        h = 1e-6
        for beta in np.linspace(0.05, 0.95, 20) * 2.0:
            fd = (max_cdf_minus_count(ASYM, 1.0, beta + h, n).value
                  - max_cdf_minus_count(ASYM, 1.0, beta - h, n).value) / (2 * h)
            assert max_pdf_minus_count(ASYM, 1.0, beta, n).value == \
                pytest.approx(fd, abs=1e-6)

    @pytest.mark.parametrize("n", [1, 2, 3, 5, 8])
    def test_integrates_to_one_minus_atom(self, n):
        val, _ = quad(lambda b: max_pdf_minus_count(ASYM, 1.0, b, n).value,
                      0.0, 2.0, epsabs=1e-12, epsrel=1e-12, limit=200)
        assert val + zero_mass_count(ASYM, n).value == \
            pytest.approx(1.0, abs=1e-9)

    def test_equal_speed_weighted_mixture(self):
        p = MotionParams(1.0, 1.0)
        for k in (1, 2, 3):
            for beta in np.linspace(0.0, 1.0, 25):
                mix = (2 * k + 1) / (2 * k + 2) \
                    * max_pdf_minus_count(p, 1.0, beta, 2 * k).value \
                    + 1 / (2 * k + 2) \
                    * max_pdf_plus_count(p, 1.0, beta, 2 * k + 1).value
                assert max_pdf_minus_count(p, 1.0, beta, 2 * k + 1).value == \
                    pytest.approx(mix, abs=1e-13)


class TestZeroMass:
    def test_symmetric_two_reversals_is_half(self):
        assert zero_mass_count_exact(1, 1, 2) == Fraction(1, 2)
        assert zero_mass_count(MotionParams(3.0, 3.0), 2).value == 0.5

    def test_asymmetric_single_reversal(self):
        assert zero_mass_count(ASYM, 1).value == pytest.approx(1.0 / 3.0,
                                                               abs=1e-16)
        assert zero_mass_count_from_triangle(ASYM, 1).value == \
            pytest.approx(1.0 / 3.0, abs=1e-16)

    @pytest.mark.parametrize("k", range(1, 11))
    def test_cyclic_pairs_exact(self, k):
        assert zero_mass_count_exact(Fraction(7, 3), Fraction(2, 5), 2 * k - 1) \
            == zero_mass_count_exact(Fraction(7, 3), Fraction(2, 5), 2 * k)

    def test_three_equals_four(self):
        assert zero_mass_count_exact(2, 1, 3) == zero_mass_count_exact(2, 1, 4)

    def test_scale_invariance(self):
        a = zero_mass_count(MotionParams(2.0, 1.0), 5).value
        b = zero_mass_count(MotionParams(4.0, 2.0), 5).value
        assert a == b

    def test_strictly_positive(self):
        for n in range(1, 20):
            assert zero_mass_count(ASYM, n).value > 0.0


class TestATriangle:
    def test_first_rows_match_reference(self):
        assert a_triangle(0) == [1]
        assert a_triangle(1) == [1, 1]
        assert a_triangle(5) == [1, 5, 14, 28, 42, 42]

    def test_recurrence_properties(self):
        for k in range(1, 12):
            row = a_triangle(k)
            prev = a_triangle(k - 1)
            assert row[-1] == row[-2]
            for j in range(k):
                assert row[j] == sum(prev[: j + 1])

    def test_diagonal_is_catalan(self):
        catalan = [1, 1, 2, 5, 14, 42, 132, 429]
        for k, value in enumerate(catalan):
            assert a_triangle(k)[-1] == value

    def test_triangle_form_matches_binomial_form(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            p = MotionParams(rng.uniform(0.3, 3.0), rng.uniform(0.3, 3.0))
            for k in range(7):
                assert abs(zero_mass_count(p, 2 * k + 1).value
                           - zero_mass_count_from_triangle(p, 2 * k + 1).value) \
                    <= 1e-12


class TestPlusUnconditional:
    def test_no_reversals_never_below_the_peak(self):
        p = MotionParams(2.0, 1.0, 0.0)
        for beta in (0.0, 1.0, 1.999):
            assert max_cdf_plus_unconditional(p, 1.0, beta).value == 0.0

    def test_boundary_value(self):
        got = max_cdf_plus_unconditional(ASYM, 1.0, 2.0)
        assert got.value == pytest.approx(1.0 - math.exp(-1.0),
                                          abs=max(1e-10, got.abs_error_bound))

    def test_point_mass(self):
        assert max_point_mass_plus(MotionParams(1, 1, 0.0), 5.0).value == 1.0
        assert max_point_mass_plus(MotionParams(1, 1, math.log(2.0)),
                                   1.0).value == pytest.approx(0.5, abs=1e-15)

    def test_point_mass_complements_cdf_limit(self):
        near_edge = 2.0 * (1.0 - 1e-9)
        cfg = SeriesConfig(tail_tolerance=1e-13)
        cdf = max_cdf_plus_unconditional(ASYM, 1.0, near_edge, cfg).value
        atom = max_point_mass_plus(ASYM, 1.0).value
        assert cdf + atom == pytest.approx(1.0, abs=1e-7)

    def test_monotone_and_bounded(self):
        grid = np.linspace(0.0, 2.0, 200)
        vals = [max_cdf_plus_unconditional(ASYM, 1.0, b).value for b in grid]
        assert all(0.0 <= v <= 1.0 + 1e-12 for v in vals)
        assert all(b >= a - 1e-12 for a, b in zip(vals, vals[1:]))


class TestMinusUnconditional:
    def test_no_reversals_stays_at_origin(self):
        p = MotionParams(2.0, 1.0, 0.0)
        for beta in (0.0, 0.5, 2.0):
            assert max_cdf_minus_unconditional(p, 1.0, beta).value == 1.0

    def test_boundary_value(self):
        got = max_cdf_minus_unconditional(ASYM, 1.0, 2.0)
        assert got.value == pytest.approx(1.0, abs=max(1e-10,
                                                       got.abs_error_bound))

    def test_symmetric_atom_formula(self):
        for rate, t in ((0.5, 1.0), (1.3, 0.7), (5.0, 1.0)):
            p = MotionParams(1.0, 1.0, rate)
            target = math.exp(-rate * t) * (iv(0, rate * t) + iv(1, rate * t))
            assert max_cdf_minus_unconditional(p, t, 0.0).value == \
                pytest.approx(float(target), abs=1e-12)
            assert zero_mass_unconditional(p, t).value == \
                pytest.approx(float(target), abs=1e-12)

    def test_atom_is_cdf_at_zero(self):
        assert zero_mass_unconditional(ASYM, 1.0).value == pytest.approx(
            max_cdf_minus_unconditional(ASYM, 1.0, 0.0).value, abs=1e-12)

    def test_atom_depends_on_speed_ratio_only(self):
        a = zero_mass_unconditional(MotionParams(2.0, 1.0, 1.0), 1.0).value
        b = zero_mass_unconditional(MotionParams(4.0, 2.0, 1.0), 1.0).value
        assert a == pytest.approx(b, abs=1e-14)

    def test_trivial_rate_atom(self):
        assert zero_mass_unconditional(MotionParams(2, 1, 0.0), 1.0).value == 1.0


class TestVelocityGap:
    def test_zero_rate_gap_is_one(self):
        p = MotionParams(2.0, 1.0, 0.0)
        for beta in (0.0, 0.7, 1.9):
            assert minus_plus_cdf_gap(p, 1.0, beta).value == 1.0

    def test_positive_when_leftward_at_least_rightward(self):
        p = MotionParams(1.0, 1.5, 2.0)
        for beta in np.linspace(0.0, 1.0, 50):
            assert minus_plus_cdf_gap(p, 1.0, beta).value > 0.0

    def test_matches_direct_subtraction(self):
        cfg = SeriesConfig(tail_tolerance=1e-12)
        for beta in np.linspace(0.0, 2.0, 21):
            direct = (max_cdf_minus_unconditional(ASYM, 1.0, beta, cfg).value
                      - max_cdf_plus_unconditional(ASYM, 1.0, beta, cfg).value)
            got = minus_plus_cdf_gap(ASYM, 1.0, beta, cfg)
            assert abs(got.value - direct) <= 2 * cfg.tail_tolerance + 1e-13


class TestGeneratingFunction:
    def test_u_zero_reduces_to_first_term(self):
        assert symmetric_cdf_generating_function(1.0, 1.0, 0.6, 0.0) == \
            pytest.approx(0.6, abs=1e-15)

    def test_full_support_geometric(self):
        assert symmetric_cdf_generating_function(1.0, 2.0, 2.0, 0.25) == \
            pytest.approx(1.0 / 0.75, abs=1e-14)

    def test_frozen_value(self):
        assert symmetric_cdf_generating_function(1.0, 1.0, 0.6, 0.5) == \
            pytest.approx(0.6 / (0.5 * math.sqrt(0.68)), abs=1e-14)

    @pytest.mark.parametrize("u", [0.2, 0.5, -0.4])
    def test_matches_series_of_conditional_cdfs(self, u):
        c = t = 1.0
        beta = 0.6
        p = MotionParams(c, c)
        series = sum(u ** k
                     * max_cdf_plus_count(p, t, beta, 2 * k + 1).value
                     for k in range(30))
        assert symmetric_cdf_generating_function(c, t, beta, u) == \
            pytest.approx(series, abs=1e-8)

    def test_domain_error_on_u(self):
        with pytest.raises(DomainError):
            symmetric_cdf_generating_function(1.0, 1.0, 0.5, 1.0)


class TestIntegrationByPartsIdentity:
    @pytest.mark.parametrize("k", range(0, 7))
    def test_kernel_integral_equals_alternating_sum(self, k):
        # int_0^beta 2 (2k+1)!/k!^2 (c^2 t^2 - x^2)^k / (2ct)^(2k+1) dx
        # against the alternating closed form
        c, t, beta = 1.2, 0.9, 0.61
        coeff = 2.0 * math.factorial(2 * k + 1) / math.factorial(k) ** 2 \
            / (2 * c * t) ** (2 * k + 1)
        val, _ = quad(lambda x: coeff * (c * c * t * t - x * x) ** k,
                      0.0, beta, epsabs=1e-13, epsrel=1e-13)
        closed = sum(
            math.comb(2 * k + 1, j)
            * ((c * t - beta) ** j * (c * t + beta) ** (2 * k + 1 - j)
               - (c * t - beta) ** (2 * k + 1 - j) * (c * t + beta) ** j)
            for j in range(k + 1)) / (2 * c * t) ** (2 * k + 1)
        assert val == pytest.approx(closed, abs=1e-10)
