import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from planarpoly.exceptions import DomainError, ParameterRangeError, StrongRegimeError
from planarpoly.model import (
    ModelParams, h_gamma, phi, phi_prime, phi_prime_at_one, re_phi, weight_contour, weight_planar,
)


class TestModelParams:
    @pytest.mark.parametrize('kwargs', [
        {'n': 0, 'N': 4},
        {'n': 4, 'N': 4},
        {'n': 4, 'N': 8, 'x': 1.0},
        {'n': 4, 'N': 8, 'x': -0.1},
        {'n': 4, 'N': 8, 'gamma': -2.0},
    ])
    def test_rejects_out_of_range(self, kwargs):
        with pytest.raises(ParameterRangeError):
            ModelParams(**kwargs)

    def test_derived_quantities(self, strong):
        assert strong.alpha == 8
        assert strong.mu == 0.5
        assert strong.c == 1.0
        assert strong.z0 == pytest.approx(1.0 / (0.09 * 2.0))
        assert strong.is_strong
        assert strong.exponent == pytest.approx(8.5)

    def test_c_tilde_shifts_by_gamma_over_2n(self, strong):
        assert strong.c_tilde == pytest.approx(1.0 + 1.0 / 16.0)

    def test_from_alpha_allows_real_n(self):
        p = ModelParams.from_alpha(5, 1.5, gamma=1.0, x=0.2)
        assert p.N == 6.5
        assert p.alpha == 1.5

    def test_replace_keeps_alpha(self):
        p = ModelParams.from_alpha(5, 1.5, gamma=1.0, x=0.2).replace(x=0.4)
        assert p.alpha == 1.5 and p.x == 0.4

    def test_weak_regime_is_rejected_where_needed(self):
        p = ModelParams(n=10, N=11, gamma=1.0, x=0.99)
        assert not p.is_strong
        with pytest.raises(StrongRegimeError):
            p.require_strong()

    def test_ell(self, strong):
        assert strong.ell(1.0) == pytest.approx(math.log(0.91))


class TestWeights:
    def test_weight_is_one_without_charge_at_origin(self):
        p = ModelParams(n=3, N=6)
        assert weight_contour(2.0 + 1.0j, p) == pytest.approx(1.0)

    def test_weight_rejects_the_unit_interval(self, strong):
        with pytest.raises(DomainError):
            weight_contour(0.5, strong)

    def test_h_gamma_tends_to_one(self):
        assert abs(h_gamma(1e9 + 0j, 1.0) - 1.0) < 1e-8

    @given(st.floats(-3.0, 3.0), st.floats(0.05, 3.0), st.floats(-1.9, 4.0))
    def test_h_gamma_schwarz_symmetric(self, re, im, gamma):
        z = complex(re, im)
        assert h_gamma(z.conjugate(), gamma) == pytest.approx(h_gamma(z, gamma).conjugate(), rel=1e-12)

    def test_planar_weight_vanishes_outside_disc(self, strong):
        assert weight_planar(1.5 + 0j, strong) == 0.0
        assert weight_planar(0.0 + 0j, strong) == pytest.approx(0.3 ** 1.0)


class TestPhi:
    def test_saddle(self, strong):
        assert abs(phi_prime(complex(strong.z0), strong)) < 1e-14

    def test_re_phi_matches_phi(self, strong):
        z = np.array([0.4 + 0.8j, -1.2 + 0.3j, 2.0 - 1.0j])
        assert np.allclose(re_phi(z, strong), phi(z, strong).real, rtol=1e-14)

    def test_phi_rejects_negative_axis(self, strong):
        with pytest.raises(DomainError):
            phi(-0.5, strong)

    def test_shifted_phi_vanishes_at_r(self, strong):
        assert abs(phi(1.0 + 0j, strong, 'shifted', r=1.0)) < 1e-15

    def test_phi_prime_at_one(self, strong):
        x2 = 0.09
        assert phi_prime_at_one(strong) == pytest.approx((1 - 2 * x2) / (1 - x2))
        assert phi_prime_at_one(strong) == pytest.approx(phi_prime(1.0 + 0j, strong).real)
