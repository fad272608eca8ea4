import cmath
import math

import mpmath
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from planarpoly.exceptions import PoleError
from planarpoly.specfun import (
    beta, gamma_star, incomplete_gamma, log_barnes_g, log_gamma, log_gamma_ratio, rgamma,
)

mpmath.mp.dps = 30


def close(a, b, rel):
    return abs(complex(a) - complex(b)) <= rel * abs(complex(b))


class TestLogGamma:
    @pytest.mark.parametrize('z', [0.3, 4.5, 2.0 + 3.0j, -1.5 + 0.5j, 30.0 - 7.0j])
    def test_matches_mpmath(self, z):
        assert close(cmath.exp(log_gamma(z)), complex(mpmath.gamma(z)), 1e-13)

    def test_real_input_gives_float(self):
        assert isinstance(log_gamma(2.5), float)

    def test_pole(self):
        with pytest.raises(PoleError):
            log_gamma(-2)

    def test_ratio_and_beta(self):
        assert log_gamma_ratio(5.0, 3.0) == pytest.approx(math.log(12.0))
        assert beta(2.0, 3.0) == pytest.approx(1.0 / 12.0)

    def test_rgamma_vanishes_at_poles(self):
        assert rgamma(0) == 0
        assert rgamma(-3) == 0


class TestIncompleteGamma:
    @pytest.mark.parametrize('a, z', [
        (1.5, 2.0 + 1.0j),
        (0.5, 0.3 - 0.2j),
        (2.5, 15.0 + 5.0j),
        (0.7 + 0.4j, 3.0 + 12.0j),
        (-0.5, 1.5 + 0.5j),
    ])
    def test_upper_matches_mpmath(self, a, z):
        expected = complex(mpmath.gammainc(a, z))
        assert close(incomplete_gamma(a, z, 'upper').complex(), expected, 1e-12)

    @pytest.mark.parametrize('a, z', [(1.5, 2.0 + 1.0j), (0.5, 20.0 - 3.0j), (3.0, 0.1j)])
    def test_lower_matches_mpmath(self, a, z):
        expected = complex(mpmath.gammainc(a, 0, z))
        assert close(incomplete_gamma(a, z, 'lower').complex(), expected, 1e-12)

    def test_upper_at_zero_is_exponential_integral(self):
        assert close(incomplete_gamma(0, 0.5, 'upper').complex(), complex(mpmath.e1(0.5)), 1e-13)

    def test_lower_pole(self):
        with pytest.raises(PoleError):
            incomplete_gamma(-1, 1.0, 'lower')

    def test_large_argument_keeps_scale(self):
        value = incomplete_gamma(1.0, 800.0, 'upper')
        assert value.log().real == pytest.approx(-800.0, rel=1e-14)

    @given(st.floats(0.2, 4.0), st.floats(0.5, 50.0), st.floats(-3.0, 3.0))
    def test_additivity(self, a, r, theta):
        assume(abs(abs(theta) - math.pi) > 0.05)
        z = cmath.rect(r, theta)
        upper = incomplete_gamma(a, z, 'upper')
        lower = incomplete_gamma(a, z, 'lower')
        whole = math.gamma(a)
        scale = max(abs(whole), abs(upper.complex()), abs(lower.complex()))
        assert abs(upper.complex() + lower.complex() - whole) <= 1e-10 * scale


    @pytest.mark.parametrize('a, z', [(1.5, 2.0 + 1.0j), (0.3 + 0.2j, 4.0 - 3.0j), (2.5, 15.0 + 5.0j), (-0.5, 0.8j)])
    def test_upper_recurrence_in_the_order(self, a, z):
        # Gamma(a + 1, z) = a Gamma(a, z) + z^a e^-z
        left = incomplete_gamma(a + 1, z, 'upper').complex()
        right = a * incomplete_gamma(a, z, 'upper').complex() + z ** a * cmath.exp(-z)
        assert close(left, right, 1e-12)


class TestGammaStar:
    def test_matches_lower_gamma(self):
        a, z = 1.3, 2.0 + 0.5j
        expected = complex(mpmath.gammainc(a, 0, z)) / (complex(mpmath.gamma(a)) * z ** a)
        assert close(gamma_star(a, z), expected, 1e-12)

    @pytest.mark.parametrize('z', [0.5, 3.0 - 2.0j, 25.0 + 1.0j])
    def test_nonpositive_integer_orders(self, z):
        assert close(gamma_star(0, z), 1.0, 1e-12)
        assert close(gamma_star(-1, z), z, 1e-12)


class TestBarnesG:
    @pytest.mark.parametrize('z', [0.7, 3.5, 25.2, 1.5 + 2.0j])
    def test_matches_mpmath(self, z):
        expected = complex(mpmath.log(mpmath.barnesg(z)))
        assert abs(complex(log_barnes_g(z)) - expected) <= 1e-11 * max(1.0, abs(expected))

    def test_integer_values(self):
        # G(n) = prod_{k<n-1} k!
        assert log_barnes_g(5) == pytest.approx(math.log(1 * 1 * 2 * 6))

    @given(st.floats(0.1, 40.0))
    def test_recursion(self, z):
        assert log_barnes_g(z + 1) == pytest.approx(log_gamma(z) + log_barnes_g(z), abs=1e-10, rel=1e-12)

    @pytest.mark.parametrize('z', [-25.5 + 3.0j, -40.2 - 1.5j, -19.7 + 12.0j, 2.0 + 35.0j])
    def test_far_left_half_plane(self, z):
        expected = complex(mpmath.log(mpmath.barnesg(z)))
        value = complex(log_barnes_g(z))
        assert value.real == pytest.approx(expected.real, rel=1e-11, abs=1e-10)
        # the imaginary part is compared modulo 2 pi
        assert abs(cmath.exp(1j * (value.imag - expected.imag)) - 1.0) <= 1e-9

    def test_zero(self):
        with pytest.raises(PoleError):
            log_barnes_g(-1)
