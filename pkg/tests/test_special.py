"""Tests for the special functions: incomplete beta and the t/F CDFs.

Reference values were computed with adaptive quadrature over the beta and
F densities (scipy.integrate.quad, epsabs ~1e-14); the quadrature oracle
also runs live in the grid tests below.
"""

import math

import numpy as np
import pytest
from scipy import integrate

from statguide import DataError, f_cdf, reg_incomplete_beta, t_cdf, t_quantile
from statguide.special import f_sf, t_sf


def beta_quadrature(x, a, b):
    """I_x(a, b) by adaptive quadrature, independent of the continued fraction."""
    const = math.exp(math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b))
    val, _ = integrate.quad(
        lambda t: const * t ** (a - 1) * (1 - t) ** (b - 1), 0, x,
        epsabs=1e-13, limit=300,
    )
    return val


def t_cdf_quadrature(x, df):
    const = math.exp(math.lgamma((df + 1) / 2) - math.lgamma(df / 2)) / math.sqrt(df * math.pi)
    val, _ = integrate.quad(
        lambda u: const * (1 + u * u / df) ** (-(df + 1) / 2), -np.inf, x,
        epsabs=1e-12, limit=300,
    )
    return val


def f_cdf_quadrature(x, d1, d2):
    const = math.exp(math.lgamma((d1 + d2) / 2) - math.lgamma(d1 / 2) - math.lgamma(d2 / 2))
    val, _ = integrate.quad(
        lambda u: const * (d1 / d2) ** (d1 / 2) * u ** (d1 / 2 - 1)
        * (1 + d1 * u / d2) ** (-(d1 + d2) / 2),
        0, x, epsabs=1e-13, limit=300,
    )
    return val


class TestIncompleteBeta:
    def test_uniform_case(self):
        for x in (0.0, 0.2, 0.5, 0.77, 1.0):
            assert reg_incomplete_beta(x, 1, 1) == pytest.approx(x, abs=1e-12)

    def test_symmetry_at_half(self):
        for a in (0.5, 1.0, 2.5, 10.0):
            assert reg_incomplete_beta(0.5, a, a) == pytest.approx(0.5, abs=1e-12)

    def test_complement_identity(self):
        rng = np.random.default_rng(0)
        for _ in range(300):
            x = float(rng.uniform(0.01, 0.99))
            a = float(rng.uniform(0.1, 20))
            b = float(rng.uniform(0.1, 20))
            lhs = reg_incomplete_beta(x, a, b)
            rhs = 1.0 - reg_incomplete_beta(1 - x, b, a)
            assert abs(lhs - rhs) < 1e-12

    def test_frozen_quadrature_value(self):
        # I_0.3(2.5, 4.0) from the quadrature oracle
        assert reg_incomplete_beta(0.3, 2.5, 4.0) == pytest.approx(
            0.3521975859018377, abs=1e-9
        )

    def test_against_live_quadrature(self):
        # 1e-9 tolerance: the quadrature itself carries ~1e-10 noise on
        # steep integrands, while the continued fraction is ~1e-15 accurate
        rng = np.random.default_rng(1)
        for _ in range(30):
            x = float(rng.uniform(0.05, 0.95))
            a = float(rng.uniform(0.3, 15))
            b = float(rng.uniform(0.3, 15))
            assert reg_incomplete_beta(x, a, b) == pytest.approx(
                beta_quadrature(x, a, b), abs=1e-9
            )

    def test_against_scipy_reference(self):
        from scipy import special

        rng = np.random.default_rng(9)
        for _ in range(300):
            x = float(rng.uniform(0, 1))
            a = float(rng.uniform(0.05, 50))
            b = float(rng.uniform(0.05, 50))
            assert reg_incomplete_beta(x, a, b) == pytest.approx(
                float(special.betainc(a, b, x)), abs=1e-12
            )

    def test_domain_errors(self):
        with pytest.raises(DataError):
            reg_incomplete_beta(-0.1, 1, 1)
        with pytest.raises(DataError):
            reg_incomplete_beta(1.1, 1, 1)
        with pytest.raises(DataError):
            reg_incomplete_beta(0.5, 0, 1)


class TestTCdf:
    def test_median_is_half(self):
        for df in (1, 2, 5.5, 30, 300):
            assert t_cdf(0.0, df) == 0.5

    def test_cauchy_closed_form(self):
        # df=1 is the Cauchy distribution: cdf(1) = 1/2 + atan(1)/pi = 3/4
        assert t_cdf(1.0, 1) == pytest.approx(0.75, abs=1e-12)

    def test_symmetry(self):
        rng = np.random.default_rng(2)
        for _ in range(200):
            x = float(rng.normal() * 3)
            df = float(rng.uniform(0.5, 100))
            assert t_cdf(x, df) + t_cdf(-x, df) == pytest.approx(1.0, abs=1e-12)

    def test_sf_complement(self):
        rng = np.random.default_rng(3)
        for _ in range(200):
            x = float(rng.normal() * 4)
            df = float(rng.uniform(0.5, 200))
            assert t_sf(x, df) == pytest.approx(1.0 - t_cdf(x, df), abs=1e-12)

    def test_monotone_and_bounded(self):
        rng = np.random.default_rng(4)
        for df in (1, 2, 8, 30, 300):
            xs = np.sort(rng.uniform(-50, 50, size=80))
            vals = [t_cdf(float(x), df) for x in xs]
            assert all(0.0 <= v <= 1.0 for v in vals)
            assert all(a <= b + 1e-14 for a, b in zip(vals, vals[1:]))

    def test_against_quadrature(self):
        rng = np.random.default_rng(5)
        for df in (1, 2, 8, 30, 300):
            for _ in range(6):
                x = float(rng.uniform(-6, 6))
                assert t_cdf(x, df) == pytest.approx(
                    t_cdf_quadrature(x, df), abs=1e-10
                )

    def test_large_sample_tail(self):
        # tail must keep precision where 1-cdf would round to zero
        assert t_sf(8.914687, 317) == pytest.approx(1.9726e-17, rel=1e-3)


class TestFCdf:
    # (x, d1, d2) -> quadrature value, frozen
    FROZEN = [
        ((0.5, 1, 1), 0.39182655203060995),
        ((1.0, 2, 3), 0.5352419984551102),
        ((2.5, 4, 10), 0.8906250000000018),
        ((0.8, 8, 8), 0.3799614841743694),
        ((3.0, 5, 30), 0.9740630078867888),
    ]

    @pytest.mark.parametrize("case,expected", FROZEN)
    def test_frozen_grid(self, case, expected):
        x, d1, d2 = case
        assert f_cdf(x, d1, d2) == pytest.approx(expected, abs=1e-9)

    def test_zero_and_negative(self):
        assert f_cdf(0.0, 3, 4) == 0.0
        with pytest.raises(DataError):
            f_cdf(-1.0, 3, 4)

    def test_monotone_and_bounded(self):
        rng = np.random.default_rng(6)
        for _ in range(30):
            d1 = int(rng.integers(1, 40))
            d2 = int(rng.integers(1, 40))
            xs = np.sort(rng.uniform(0, 20, size=40))
            vals = [f_cdf(float(x), d1, d2) for x in xs]
            assert all(0.0 <= v <= 1.0 for v in vals)
            assert all(a <= b + 1e-14 for a, b in zip(vals, vals[1:]))

    def test_sf_complement(self):
        rng = np.random.default_rng(7)
        for _ in range(100):
            x = float(rng.uniform(0, 10))
            d1 = int(rng.integers(1, 30))
            d2 = int(rng.integers(1, 30))
            assert f_sf(x, d1, d2) == pytest.approx(1.0 - f_cdf(x, d1, d2), abs=1e-12)


class TestTQuantile:
    def test_median(self):
        assert t_quantile(0.5, 7) == 0.0

    def test_roundtrip(self):
        rng = np.random.default_rng(8)
        for _ in range(100):
            p = float(rng.uniform(0.001, 0.999))
            df = float(rng.uniform(1, 200))
            x = t_quantile(p, df)
            assert t_cdf(x, df) == pytest.approx(p, abs=1e-10)

    def test_domain(self):
        with pytest.raises(DataError):
            t_quantile(0.0, 5)
        with pytest.raises(DataError):
            t_quantile(1.0, 5)
