"""
Complex special functions: log Gamma, incomplete Gamma, Beta and log Barnes G.

The incomplete Gamma function follows the series / continued fraction split
of Numerical Recipes (ch. 6.2), carried over to complex arguments with the
modified Lentz method. Products of Gamma and Barnes G values are always
assembled in log space.
"""
import cmath
import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .conf import settings
from .exceptions import ConvergenceError, PoleError

logger = logging.getLogger(__name__)

EULER_GAMMA = 0.57721566490153286061
# zeta'(-1) = 1/12 - log(Glaisher constant)
ZETA_PRIME_MINUS_ONE = -0.16542114370045092921
LOG_2PI = math.log(2.0 * math.pi)
TINY = 1e-300
_BERNOULLI = special.bernoulli(16)


@dataclass(frozen=True)
class GammaResult:
    """value * exp(log_scale); keeps values that overflow a double representable."""
    value: complex
    log_scale: float = 0.0

    @classmethod
    def from_log(cls, log_value):
        log_value = complex(log_value)
        return cls(cmath.exp(1j * log_value.imag), log_value.real)

    def complex(self):
        if self.value == 0:
            return 0j
        return self.value * math.exp(self.log_scale)

    def log(self):
        """Logarithm with the imaginary part taken from the phase of ``value``."""
        if self.value == 0:
            return complex(-math.inf, 0.0)
        return cmath.log(self.value) + self.log_scale

    def scaled(self, factor):
        return GammaResult(self.value * factor, self.log_scale)

    def __sub__(self, other):
        scale = max(self.log_scale, other.log_scale)
        value = (self.value * math.exp(self.log_scale - scale)
                 - other.value * math.exp(other.log_scale - scale))
        return GammaResult(value, scale)

    def __add__(self, other):
        return self - other.scaled(-1.0)


def _is_nonpositive_integer(z):
    z = complex(z)
    return z.imag == 0.0 and z.real <= 0.0 and z.real == math.floor(z.real)


def log_gamma(z):
    """
    Principal-branch log Gamma. Real positive input gives a real result;
    arrays are accepted.
    """
    if np.ndim(z) == 0:
        if _is_nonpositive_integer(z):
            raise PoleError('log_gamma has a pole at nonpositive integers', z=complex(z))
        if isinstance(z, (int, float, np.floating, np.integer)) and z > 0:
            return float(special.gammaln(z))
        return complex(special.loggamma(complex(z)))
    z = np.asarray(z)
    if np.iscomplexobj(z) or np.any(z <= 0):
        zc = z.astype(complex)
        if np.any((zc.imag == 0) & (zc.real <= 0) & (zc.real == np.floor(zc.real))):
            raise PoleError('log_gamma has a pole at nonpositive integers')
        return special.loggamma(zc)
    return special.gammaln(z)


def log_gamma_ratio(a, b):
    """log Gamma(a) - log Gamma(b)."""
    return log_gamma(a) - log_gamma(b)


def rgamma(z):
    """1/Gamma(z), entire; zero at the poles of Gamma."""
    return complex(special.rgamma(complex(z)))


def beta(a, b):
    """B(a, b) = Gamma(a) Gamma(b) / Gamma(a + b)."""
    value = cmath.exp(log_gamma(a) + log_gamma(b) - log_gamma(a + b))
    if complex(a).imag == 0 and complex(b).imag == 0:
        return value.real
    return value


def log_beta(a, b):
    return log_gamma(a) + log_gamma(b) - log_gamma(a + b)


# ---------------------------------------------------------------------------
# Incomplete Gamma
# ---------------------------------------------------------------------------

def _lower_series(a, z, accuracy, max_iteration):
    """
    Sum_{k>=0} z^k / (a (a+1) ... (a+k)); gamma(a, z) = z^a e^-z times this.
    """
    ap = a
    term = 1.0 / a
    total = term
    for _ in range(max_iteration):
        ap += 1.0
        term *= z / ap
        total += term
        if abs(term) < abs(total) * accuracy:
            return total
    raise ConvergenceError('incomplete gamma series did not converge', a=a, z=z)


def _upper_continued_fraction(a, z, accuracy, max_iteration):
    """
    Continued fraction for Gamma(a, z) e^z z^-a, modified Lentz.
    """
    b = z + 1.0 - a
    c = 1.0 / TINY
    d = 1.0 / b
    h = d
    for i in range(1, max_iteration + 1):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < TINY:
            d = TINY
        c = b + an / c
        if abs(c) < TINY:
            c = TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < accuracy:
            return h
    raise ConvergenceError('incomplete gamma continued fraction did not converge', a=a, z=z)


def _config():
    cfg = settings.SPECFUN
    return cfg['GAMMA_CROSSOVER'], cfg['GAMMA_ACCURACY'], cfg['GAMMA_MAX_ITERATIONS']


def incomplete_gamma(a, z, kind='upper'):
    """
    Principal-branch incomplete Gamma function.

    ``kind='upper'`` gives Gamma(a, z) and ``kind='lower'`` gives gamma(a, z).
    The series is used for |z| <= max(crossover, |a|), the continued fraction
    beyond; the other kind follows from Gamma(a) = Gamma(a, z) + gamma(a, z).
    """
    if kind not in ('upper', 'lower'):
        raise ValueError(f'unknown kind {kind!r}')
    a = complex(a)
    z = complex(z)
    crossover, accuracy, max_iteration = _config()
    a_is_pole = _is_nonpositive_integer(a)

    if kind == 'lower' and a_is_pole:
        raise PoleError('lower incomplete gamma has a pole at a = 0, -1, -2, ...', a=a)

    if z == 0:
        if kind == 'lower':
            return GammaResult(0j, 0.0)
        if a.real <= 0:
            raise PoleError('Gamma(a, 0) diverges for Re(a) <= 0', a=a)
        return GammaResult.from_log(log_gamma(a))

    log_prefactor = a * cmath.log(z) - z

    if abs(z) > max(crossover, abs(a)):
        logger.debug('incomplete_gamma: continued fraction at a=%s z=%s', a, z)
        upper = GammaResult.from_log(log_prefactor).scaled(
            _upper_continued_fraction(a, z, accuracy, max_iteration))
        if kind == 'upper':
            return upper
        return GammaResult.from_log(log_gamma(a)) - upper

    if a_is_pole:
        return _upper_at_nonpositive_integer(int(round(a.real)), z)

    lower = GammaResult.from_log(log_prefactor).scaled(_lower_series(a, z, accuracy, max_iteration))
    if kind == 'lower':
        return lower
    return GammaResult.from_log(log_gamma(a)) - lower


def _upper_at_nonpositive_integer(a, z):
    # Gamma(0, z) = E1(z); Gamma(a, z) = (Gamma(a+1, z) - z^a e^-z) / a going down
    value = complex(special.exp1(z))
    for k in range(0, a, -1):
        value = (value - cmath.exp((k - 1) * cmath.log(z) - z)) / (k - 1)
    return GammaResult(value, 0.0)


def gamma_star(a, z):
    """
    Entire function z^-a gamma(a, z) / Gamma(a) = e^-z sum_k z^k / Gamma(a + k + 1).

    Defined for every a, including nonpositive integers.
    """
    a = complex(a)
    z = complex(z)
    crossover, accuracy, max_iteration = _config()
    if abs(z) > max(crossover, abs(a)) and not _is_nonpositive_integer(a):
        upper = incomplete_gamma(a, z, 'upper')
        log_ga = log_gamma(a)
        regularized = 1.0 - upper.scaled(cmath.exp(-log_ga)).complex()
        return cmath.exp(-a * cmath.log(z)) * regularized
    total = 0j
    term_index = 0
    while True:
        term = z ** term_index * rgamma(a + term_index + 1)
        total += term
        if term_index > abs(z) and abs(term) <= accuracy * abs(total):
            break
        term_index += 1
        if term_index > max_iteration:
            raise ConvergenceError('gamma_star series did not converge', a=a, z=z)
    return cmath.exp(-z) * total


# ---------------------------------------------------------------------------
# Barnes G
# ---------------------------------------------------------------------------

def _barnes_asymptotic(w):
    """log G(w + 1) for large |w|."""
    log_w = cmath.log(w)
    total = ((w * w / 2.0 - 1.0 / 12.0) * log_w - 0.75 * w * w
             + 0.5 * w * LOG_2PI + ZETA_PRIME_MINUS_ONE)
    w2 = w * w
    power = w2
    for k in range(1, 8):
        total += _BERNOULLI[2 * k + 2] / (4.0 * k * (k + 1) * power)
        power *= w2
    return total


def log_barnes_g(z):
    """
    log G(z) via the asymptotic series at a shifted argument and the
    recursion G(z + 1) = Gamma(z) G(z).
    """
    if _is_nonpositive_integer(z):
        raise PoleError('Barnes G vanishes at nonpositive integers', z=complex(z))
    is_real = isinstance(z, (int, float, np.integer, np.floating)) and z > 0
    z = complex(z)
    shift_target = settings.section('SPECFUN', 'BARNES_SHIFT')
    shifts = max(0, math.ceil(shift_target - z.real))
    # log G(z) = log G(z + m) - sum_{k<m} log Gamma(z + k)
    value = _barnes_asymptotic(z + shifts - 1.0)
    if shifts:
        value -= complex(np.sum(special.loggamma(z + np.arange(shifts))))
    return value.real if is_real else value
