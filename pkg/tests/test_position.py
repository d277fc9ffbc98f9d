"""Position-law checks: kernels, atoms, covariance, mixtures."""

import math

import numpy as np
import pytest
from scipy.integrate import quad

from telemax import (
    DomainError,
    MotionParams,
    Velocity,
    nonhomogeneous_position_pdf,
    position_atoms,
    position_pdf,
    position_pdf_given_count,
)

ASYM = MotionParams(2.0, 1.0, 1.0)


class TestConditionalPositionLaws:
    def test_single_reversal_is_uniform(self):
        t = 1.3
        for x in (-1.2, 0.0, 2.5):
            assert position_pdf_given_count(ASYM, t, x, 1).value == \
                pytest.approx(1.0 / (3.0 * t), abs=1e-15)

    def test_two_reversals_plus_kernel(self):
        t = 1.0
        for x in (-0.9, 0.0, 1.7):
            expected = 2.0 * (1.0 + x) / 9.0
            assert position_pdf_given_count(ASYM, t, x, 2,
                                            Velocity.PLUS).value == \
                pytest.approx(expected, abs=1e-15)

    def test_even_kernels_differ_at_right_edge(self):
        # the PLUS kernel stays positive at x = c1 t, the MINUS one vanishes
        t = 1.0
        plus = position_pdf_given_count(ASYM, t, 2.0, 2, Velocity.PLUS).value
        minus = position_pdf_given_count(ASYM, t, 2.0, 2, Velocity.MINUS).value
        assert plus > 0.0
        assert minus == 0.0

    def test_odd_counts_forget_the_start(self):
        for n in (1, 3, 5, 9):
            for x in np.linspace(-1.0, 2.0, 13):
                a = position_pdf_given_count(ASYM, 1.0, x, n,
                                             Velocity.PLUS).value
                b = position_pdf_given_count(ASYM, 1.0, x, n,
                                             Velocity.MINUS).value
                assert a == b

    def test_averaged_even_law_equals_previous_odd(self):
        for k in (1, 2, 4):
            for x in np.linspace(-1.0, 2.0, 13):
                assert position_pdf_given_count(ASYM, 1.0, x, 2 * k).value == \
                    pytest.approx(
                        position_pdf_given_count(ASYM, 1.0, x,
                                                 2 * k - 1).value, abs=1e-14)

    @pytest.mark.parametrize("n,v0", [(1, None), (2, Velocity.PLUS),
                                      (2, Velocity.MINUS), (3, None),
                                      (6, Velocity.PLUS), (7, None)])
    def test_normalization(self, n, v0):
        val, _ = quad(lambda x: position_pdf_given_count(ASYM, 1.0, x, n,
                                                         v0).value,
                      -1.0, 2.0, epsabs=1e-12, epsrel=1e-12, limit=200)
        assert val == pytest.approx(1.0, abs=1e-10)

    def test_galilean_shift_to_equal_speeds(self):
        # density at x equals the equal-speed density at x + (c2-c1) t / 2
        t = 0.8
        sym = MotionParams(1.5, 1.5)
        shift = (ASYM.c2 - ASYM.c1) / 2.0 * t
        for n, v0 in ((1, None), (2, Velocity.PLUS), (2, Velocity.MINUS),
                      (5, None), (8, Velocity.MINUS)):
            for x in np.linspace(-0.79, 1.59, 15):
                a = position_pdf_given_count(ASYM, t, x, n, v0).value
                b = position_pdf_given_count(sym, t, x + shift, n, v0).value
                assert a == pytest.approx(b, abs=1e-12)


class TestUnconditionalPosition:
    def test_atoms(self):
        assert position_atoms(MotionParams(2, 1, 0.0), 1.0) == (0.5, 0.5)
        left, right = position_atoms(MotionParams(2, 1, math.log(4.0)), 1.0)
        assert left == pytest.approx(0.125, abs=1e-15)
        assert right == pytest.approx(0.125, abs=1e-15)

    def test_mass_splits_between_density_and_atoms(self):
        for p, t in ((ASYM, 1.0), (MotionParams(0.8, 1.7, 2.5), 0.6)):
            val, _ = quad(lambda x: position_pdf(p, t, x).value,
                          -p.c2 * t, p.c1 * t, epsabs=1e-12, epsrel=1e-12,
                          limit=200)
            assert val == pytest.approx(1.0 - math.exp(-p.rate * t), abs=1e-9)

    def test_poisson_mixture_of_conditionals(self):
        p, t = ASYM, 0.9
        for x in np.linspace(-0.85, 1.75, 9):
            mu = p.rate * t
            pmf = math.exp(-mu)
            mix = 0.0
            for n in range(1, 60):
                pmf_n = math.exp(-mu) * mu ** n / math.factorial(n)
                mix += pmf_n * position_pdf_given_count(p, t, x, n).value
            assert position_pdf(p, t, x).value == pytest.approx(mix, abs=1e-9)

    def test_symmetric_reduction_matches_classical_form(self):
        c, rate, t = 1.0, 1.5, 1.0
        p = MotionParams(c, c, rate)
        for x in np.linspace(-0.9, 0.9, 7):
            z = rate / c * math.sqrt(c * c * t * t - x * x)
            from scipy.special import iv
            classical = math.exp(-rate * t) / (2 * c) * (
                rate * iv(0, z)
                + rate * c * t * iv(1, z) / math.sqrt(c * c * t * t - x * x))
            assert position_pdf(p, t, x).value == \
                pytest.approx(float(classical), rel=1e-12)

    def test_boundary_rejected(self):
        with pytest.raises(DomainError):
            position_pdf(ASYM, 1.0, 2.0)
        with pytest.raises(DomainError):
            position_pdf(ASYM, 1.0, -1.0)


class TestNonhomogeneousPosition:
    def test_alpha_one_is_uniform(self):
        for x in (-0.9, 0.0, 1.9):
            assert nonhomogeneous_position_pdf(ASYM, 1.0, 1.0, x).value == \
                pytest.approx(1.0 / 3.0, abs=1e-15)

    def test_symmetric_reduction_beta_form(self):
        # equal speeds: 1/B(alpha, 1/2) (c^2 t^2 - x^2)^(a-1) / (ct)^(2a-1)
        c, t, alpha = 1.0, 1.0, 1.7
        p = MotionParams(c, c)
        norm = math.gamma(alpha + 0.5) / (math.gamma(alpha)
                                          * math.gamma(0.5))
        for x in np.linspace(-0.9, 0.9, 7):
            expected = norm * (c * c * t * t - x * x) ** (alpha - 1.0) \
                / (c * t) ** (2 * alpha - 1.0)
            assert nonhomogeneous_position_pdf(p, alpha, t, x).value == \
                pytest.approx(expected, rel=1e-13)

    @pytest.mark.parametrize("alpha", [0.5, 1.5, 2.5, 4.0])
    def test_normalization_including_half_integers(self, alpha):
        # endpoint singularities for alpha < 1 are integrable; the clamp at
        # the (measure-zero) edges lets the extrapolating quadrature work
        def dens(x):
            if not -1.0 < x < 2.0:
                return 0.0
            return nonhomogeneous_position_pdf(ASYM, alpha, 1.0, x).value

        val, _ = quad(dens, -1.0, 2.0, epsabs=1e-12, epsrel=1e-12, limit=400)
        assert val == pytest.approx(1.0, abs=1e-10)

    def test_matches_integer_count_conditional_law(self):
        # alpha = k+... natural alpha: the law equals the (2 alpha - 1)-count kernel
        for alpha in (1, 2, 3):
            for x in np.linspace(-0.9, 1.9, 7):
                a = nonhomogeneous_position_pdf(ASYM, float(alpha), 1.0,
                                                x).value
                b = position_pdf_given_count(ASYM, 1.0, x,
                                             2 * alpha - 1).value
                assert a == pytest.approx(b, rel=1e-13)

    def test_alpha_domain_error(self):
        with pytest.raises(DomainError):
            nonhomogeneous_position_pdf(ASYM, 0.0, 1.0, 0.5)
