import cmath
import math

import numpy as np
import pytest

from planarpoly import asymptotics, geometry, orthopoly
from planarpoly.exceptions import ParameterRangeError, StrongRegimeError
from planarpoly.geometry import Region
from planarpoly.model import ModelParams, phi_prime_at_one
from planarpoly.specfun import log_barnes_g


@pytest.fixture(scope='module')
def large():
    p = ModelParams(n=40, N=80, gamma=1.0, x=0.3)
    return p, orthopoly.monic_pair(p, p.n)


class TestPolynomialRegions:
    def test_exterior_without_charge_is_monomial(self):
        p = ModelParams(n=12, N=24, gamma=0.0, x=0.3)
        prediction = asymptotics.pn_asymptotic(3.0 + 1.0j, p, Region.EXT)
        assert prediction.log_value == pytest.approx(12 * cmath.log(3.0 + 1.0j), rel=1e-15)

    def test_interior_vanishes_without_charge(self):
        p = ModelParams(n=12, N=24, gamma=0.0, x=0.3)
        prediction = asymptotics.pn_asymptotic(0.3, p, Region.INT)
        assert prediction.vanishing
        assert prediction.value == 0

    def test_monic_at_infinity(self, strong):
        z = 1e6 + 1e6j
        prediction = asymptotics.pn_asymptotic(z, strong, Region.EXT)
        assert abs(prediction.log_value - strong.n * cmath.log(z)) < 1e-6

    def test_neighbourhood_adds_both_terms(self, strong):
        z = 0.9 + 0.6j
        both = asymptotics.pn_asymptotic(z, strong, Region.NBHD_U).value
        interior = asymptotics.pn_asymptotic(z, strong, Region.INT).value
        exterior = asymptotics.pn_asymptotic(z, strong, Region.EXT).value
        assert both == pytest.approx(interior + exterior, rel=1e-12)

    def test_uniform_disc_is_finite_at_one(self, strong):
        prediction = asymptotics.pn_asymptotic(1.0, strong, Region.DISC, 'uniform')
        assert math.isfinite(prediction.log_value.real)

    def test_unknown_convention(self, strong):
        with pytest.raises(ParameterRangeError):
            asymptotics.pn_asymptotic(1.0, strong, Region.DISC, 'typeset')

    def test_weak_regime_is_refused(self):
        with pytest.raises(StrongRegimeError):
            asymptotics.pn_asymptotic(0.5, ModelParams(n=10, N=11, gamma=1.0, x=0.99))

    def test_interior_matches_exact_polynomial(self, large):
        p, pair = large
        rows = asymptotics.region_table(p, [0.2, 0.3j], pair=pair)
        assert all(row['region'] == 'IntGamma1' for row in rows)
        assert max(row['rel_err'] for row in rows) <= 10.0 / p.n

    def test_exterior_matches_exact_polynomial(self, large):
        p, pair = large
        rows = asymptotics.region_table(p, [2.5, -1.5 + 1.0j], pair=pair)
        assert all(row['region'] == 'ExtGamma1' for row in rows)
        assert max(row['rel_err'] for row in rows) <= 10.0 / p.n

    def test_disc_matches_exact_polynomial(self, large):
        p, pair = large
        theta = np.linspace(0.5 * math.pi, 1.5 * math.pi, 10)[1:-1]
        points = 1.0 - 3.0 * np.exp(1j * theta) / (phi_prime_at_one(p) * p.n)
        for z in points:
            exact = np.log(complex(np.polynomial.polynomial.polyval(z, pair.P)))
            assert asymptotics.pn_asymptotic(z, p, Region.DISC).relative_error(exact) <= 10.0 / p.n

    def test_two_terms_beat_either_single_term_near_the_curve(self, large):
        p, pair = large
        curve = geometry.trace_gamma(p, 1.0)
        ring = [z for z in asymptotics.ring(curve, 1.0, 64) if abs(z - 1.0) > 3.0 / p.n]
        errors = {region: 0.0 for region in (Region.NBHD_U, Region.INT, Region.EXT)}
        for z in ring:
            exact = np.log(complex(np.polynomial.polynomial.polyval(z, pair.P)))
            for region in errors:
                errors[region] = max(errors[region], asymptotics.pn_asymptotic(z, p, region).relative_error(exact))
        assert errors[Region.NBHD_U] <= min(errors[Region.INT], errors[Region.EXT])


class TestContourIntegral:
    def test_residue_only_without_charge(self):
        p = ModelParams(n=10, N=20, gamma=0.0, x=0.3)
        z = 0.5 + 0.2j
        direct, _ = asymptotics.integral_direct(z, p)
        exact = z ** 10 * (1 - 0.09 * z) ** 10
        assert direct == pytest.approx(exact, rel=1e-10)
        prediction = asymptotics.integral_asymptotic(z, p, 'interior')
        assert prediction.value == pytest.approx(exact, rel=1e-12)

    def test_exterior_regime(self):
        p = ModelParams(n=40, N=80, gamma=1.0, x=0.3)
        direct, _ = asymptotics.integral_direct(2.0, p)
        prediction = asymptotics.integral_asymptotic(2.0, p, 'exterior')
        assert prediction.relative_error(cmath.log(direct)) <= 10.0 / p.n

    def test_critical_regime_matches_quadrature(self, large):
        p, _ = large
        curve = geometry.trace_gamma(p, asymptotics.contour_level(p))
        theta = np.linspace(0.5 * math.pi, 1.5 * math.pi, 6)[1:-1]
        for a in 3.0 * np.exp(1j * theta):
            z = 1.0 - a / (phi_prime_at_one(p) * p.n)
            direct, _ = asymptotics.integral_direct(z, p, curve=curve)
            prediction = asymptotics.integral_asymptotic(z, p, 'critical')
            assert prediction.relative_error(np.log(direct)) <= 10.0 / p.n

    def test_contour_level_stays_below_saddle(self):
        p = ModelParams(n=10, N=11, gamma=1.0, x=0.9)
        assert 1.0 < asymptotics.contour_level(p) < p.z0

    def test_critical_rejects_positive_a(self, strong):
        with pytest.raises(ParameterRangeError):
            asymptotics.integral_asymptotic(None, strong, 'critical', a=2.0)

    def test_unknown_regime(self, strong):
        with pytest.raises(ParameterRangeError):
            asymptotics.integral_asymptotic(2.0, strong, 'outer')


class TestRGammaAsymptotic:
    def test_reduces_to_origin_formula(self):
        p = ModelParams(n=30, N=50, gamma=1.5)
        g, mu, n = 1.5, 0.6, 30
        expected = (g * g / 8 * math.log(n) + n * g / 2 * math.log(mu)
                    + (p.alpha * g / 2 + g * g / 8) * math.log(1 - mu)
                    + g / 4 * math.log(2 * math.pi) - log_barnes_g(1 + g / 2))
        assert asymptotics.rgamma_asymptotic(p) == pytest.approx(expected, rel=1e-12)

    def test_matches_exact_determinant(self):
        p = ModelParams(n=20, N=40, gamma=1.0, x=0.3)
        ratio = math.exp(orthopoly.rgamma_exact(p) - asymptotics.rgamma_asymptotic(p))
        assert abs(ratio - 1.0) <= 5.0 / p.n

    def test_error_halves_when_n_doubles(self):
        errors = {}
        for n in (10, 20, 40):
            p = ModelParams(n=n, N=2 * n, gamma=1.0, x=0.3)
            errors[n] = abs(math.expm1(orthopoly.rgamma_exact(p) - asymptotics.rgamma_asymptotic(p)))
            assert errors[n] <= 5.0 / n
        assert 1.5 <= errors[20] / errors[40] <= 3.0

    def test_bulk_slope(self):
        p = ModelParams(n=6, N=12, gamma=2.0, x=0.3)
        assert asymptotics.dlogr_asymptotic(p) == pytest.approx(7.0 * 0.6 / 0.91)


class TestClt:
    def test_kappa1_at_origin(self):
        p = ModelParams(n=10, N=25)
        assert asymptotics.kappa1(p) == pytest.approx(10 * math.log(0.4) + 15 * math.log(0.6))

    def test_standardization(self):
        p = ModelParams(n=10, N=20, x=0.3)
        centre = asymptotics.kappa1(p) / 2.0
        values = asymptotics.clt_standardize([centre, centre + 0.5 * math.sqrt(math.log(10))], p)
        assert np.allclose(values, [0.0, 1.0])

    def test_standardization_needs_two_eigenvalues(self):
        with pytest.raises(ParameterRangeError):
            asymptotics.clt_standardize([0.0], ModelParams(n=1, N=4))

    def test_finite_n_moments(self):
        p = ModelParams(n=200, N=400, x=0.3)
        mean, variance = asymptotics.clt_moments(p)
        scale = 0.25 * math.log(200)
        assert mean == pytest.approx(0.25 / math.sqrt(scale))
        assert variance - 1.0 == pytest.approx(
            (0.25 * (1 + np.euler_gamma) + 0.25 * math.log(0.5) - 0.5 * math.log(0.91)) / scale)
        assert variance > asymptotics.clt_moments(ModelParams(n=10_000, N=20_000, x=0.3))[1] > 1.0

    def test_mgf_at_zero(self):
        p = ModelParams(n=10, N=20, x=0.3)
        assert asymptotics.clt_log_mgf(0.0, p) == pytest.approx(0.0, abs=1e-10)
        assert asymptotics.clt_log_mgf(0.0, p, exact=False) == pytest.approx(0.0, abs=1e-12)

    def test_mgf_exact_and_asymptotic_agree(self):
        p = ModelParams(n=20, N=40, x=0.3)
        exact = asymptotics.clt_log_mgf(0.5, p)
        approx = asymptotics.clt_log_mgf(0.5, p, exact=False)
        assert abs(exact - approx) <= 5.0 / p.n


def test_ring_samples_the_curve(strong):
    curve = geometry.trace_gamma(strong, 1.0)
    points = asymptotics.ring(curve, 2.0, 8)
    assert len(points) == 8
    assert points[0] == pytest.approx(2.0)
