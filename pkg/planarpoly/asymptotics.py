"""
Large-n formulas and their comparison against exact finite-n values.

Everything is assembled as a complex logarithm; exponentiation happens only
when a caller asks for ``value``.
"""
import cmath
import logging
import math
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import polynomial as npoly

from .conf import settings
from .exceptions import ParameterRangeError, StrongRegimeError
from .geometry import Region, RegionLabel, classify, trace_gamma
from .model import BranchConvention, phi_prime_at_one
from .orthopoly import monic_pair, rgamma_exact, rgamma_zero
from .quadrature import contour_integral
from .specfun import gamma_star, incomplete_gamma, log_barnes_g, rgamma

logger = logging.getLogger(__name__)

REGIMES = ('interior', 'critical', 'exterior')
DISC_CONVENTIONS = ('uniform', 'printed')
NEG_INF = complex(-math.inf, 0.0)


@dataclass(frozen=True)
class AsymptoticPrediction:
    log_value: complex
    region: str
    order: str
    inputs: dict = field(default_factory=dict)
    vanishing: bool = False

    @property
    def value(self):
        if self.log_value.real == -math.inf:
            return 0j
        return cmath.exp(self.log_value)

    def relative_error(self, exact_log):
        """|prediction / exact - 1| computed from the two logarithms."""
        if self.vanishing:
            return 1.0
        return abs(cmath.exp(self.log_value - complex(exact_log)) - 1.0)


def _log_add(a, b):
    if a.real == -math.inf:
        return b
    if b.real == -math.inf:
        return a
    big, small = (a, b) if a.real >= b.real else (b, a)
    return big + cmath.log(1.0 + cmath.exp(small - big))


def _log_rgamma(g):
    value = rgamma(g)
    return (NEG_INF, True) if value == 0 else (cmath.log(value), False)


def _half_gamma(p):
    return complex(p.real_gamma) / 2.0


def _log_scale(p):
    """log(n phi'(1))."""
    slope = phi_prime_at_one(p)
    if slope <= 0:
        raise StrongRegimeError("phi'(1) must be positive", x=p.x, c=p.c)
    return math.log(p.n * slope)


def _log_prefactor(z, p):
    """log ((1 - x^2)/(1 - x^2 z))^(alpha + gamma/2)."""
    return complex(p.exponent) * (math.log1p(-p.x * p.x) - complex(BranchConvention.log_one_minus(p.x, z)))


def _log_ext(z, p):
    return p.n * cmath.log(z) - complex(BranchConvention.log_h(z, p.real_gamma))


def _log_int(z, p):
    g = _half_gamma(p)
    log_rg, vanishing = _log_rgamma(g)
    value = _log_prefactor(z, p) + (g - 1.0) * _log_scale(p) - cmath.log(1.0 - z) + log_rg
    return value, vanishing


def _log_disc(z, p, convention):
    g = _half_gamma(p)
    w = p.n * phi_prime_at_one(p) * (z - 1.0)
    if convention == 'uniform':
        star = gamma_star(g, w)
        if star == 0:
            return NEG_INF, True
        return _log_prefactor(z, p) + g * _log_scale(p) + w + cmath.log(star), False
    log_rg, vanishing = _log_rgamma(g)
    if vanishing:
        return NEG_INF, True
    upper = incomplete_gamma(g, w, 'upper').log()
    return _log_prefactor(z, p) + w + upper + log_rg - g * cmath.log(z - 1.0), False


def _coerce_region(label):
    if isinstance(label, RegionLabel):
        return label.region
    if isinstance(label, Region):
        return label
    return Region(label)


def pn_asymptotic(z, p, label=None, convention=None):
    """Large-n form of the monic P_n(z) in the region ``label`` (classified when omitted)."""
    p.require_strong()
    z = complex(z)
    convention = convention or settings.section('ASYMPTOTICS', 'DISC_CONVENTION')
    if convention not in DISC_CONVENTIONS:
        raise ParameterRangeError(f'unknown disc convention {convention!r}', choices=DISC_CONVENTIONS)
    region = _coerce_region(label if label is not None else classify(z, p))
    inputs = {'z': z, 'n': p.n, 'N': p.N, 'gamma': p.gamma, 'x': p.x}

    if region is Region.EXT:
        return AsymptoticPrediction(_log_ext(z, p), region.value, 'O(n^-inf)', inputs)
    if region is Region.INT:
        value, vanishing = _log_int(z, p)
        return AsymptoticPrediction(value, region.value, 'O(1/n)', inputs, vanishing)
    if region is Region.NBHD_U:
        interior, _ = _log_int(z, p)
        return AsymptoticPrediction(_log_add(interior, _log_ext(z, p)), region.value, 'O(1/n)', inputs)
    value, vanishing = _log_disc(z, p, convention)
    inputs['convention'] = convention
    return AsymptoticPrediction(value, region.value, 'O(1/n)', inputs, vanishing)


# ---------------------------------------------------------------------------
# Contour integral over Gamma_t
# ---------------------------------------------------------------------------

def contour_level(p):
    """Level t of Gamma_t: the configured value, kept strictly between 1 and z0."""
    t = settings.section('ASYMPTOTICS', 'CONTOUR_T')
    return min(t, 0.5 * (1.0 + p.z0))


def _log_e_phi_tilde(s, p):
    """n phi_tilde(s) = n log s + (alpha + gamma/2) log(1 - x^2 s)."""
    return p.n * np.log(s) + complex(p.exponent) * BranchConvention.log_one_minus(p.x, s)


def integral_direct(z, p, t=None, curve=None):
    """(1/2 pi i) oint_{Gamma_t} e^{n phi_tilde(s)} h_{-gamma}(s) ds/(s - z), by quadrature."""
    curve = curve or trace_gamma(p, t or contour_level(p))
    z = complex(z)

    def integrand(s):
        return np.exp(_log_e_phi_tilde(s, p) + BranchConvention.log_h(s, -p.real_gamma)) / (s - z)

    value, error = contour_integral(integrand, curve)
    return value / (2j * math.pi), error / (2.0 * math.pi)


def integral_asymptotic(z, p, regime, a=None, convention=None):
    """
    Large-n value of the Gamma_t integral. ``critical`` takes z = 1 - a/(phi'(1) n);
    either z or a may be given.
    """
    if regime not in REGIMES:
        raise ParameterRangeError(f'unknown regime {regime!r}', choices=REGIMES)
    p.require_strong()
    convention = convention or settings.section('ASYMPTOTICS', 'DISC_CONVENTION')
    g = _half_gamma(p)
    slope = phi_prime_at_one(p)
    log_at_one = complex(p.exponent) * math.log1p(-p.x * p.x)
    log_rg, vanishing = _log_rgamma(g)
    inputs = {'n': p.n, 'gamma': p.gamma, 'x': p.x, 'regime': regime}

    if regime == 'critical':
        if a is None:
            a = p.n * slope * (1.0 - complex(z))
        a = complex(a)
        if a.imag == 0 and a.real >= 0:
            raise ParameterRangeError('a must avoid [0, inf)', a=a)
        inputs.update(a=a, convention=convention)
        if convention == 'uniform':
            star = gamma_star(g, -a)
            if star == 0:
                return AsymptoticPrediction(NEG_INF, regime, 'O(1/n)', inputs, True)
            value = log_at_one + g * _log_scale(p) - a + cmath.log(star)
            return AsymptoticPrediction(value, regime, 'O(1/n)', inputs)
        if vanishing:
            return AsymptoticPrediction(NEG_INF, regime, 'O(1/n)', inputs, True)
        upper = incomplete_gamma(g, a, 'upper').log()
        value = (log_at_one + 1j * math.pi * g + g * _log_scale(p) - g * cmath.log(a) - a
                 + upper + log_rg)
        return AsymptoticPrediction(value, regime, 'O(1/n)', inputs)

    z = complex(z)
    inputs['z'] = z
    exterior = log_at_one + (g - 1.0) * _log_scale(p) - cmath.log(1.0 - z) + log_rg
    if regime == 'exterior':
        return AsymptoticPrediction(exterior, regime, 'O(1/n)', inputs, vanishing)
    residue = complex(_log_e_phi_tilde(z, p)) - complex(BranchConvention.log_h(z, p.real_gamma))
    return AsymptoticPrediction(_log_add(residue, exterior), regime, 'O(1/n)', inputs)


# ---------------------------------------------------------------------------
# log R_gamma(x)
# ---------------------------------------------------------------------------

def rgamma_asymptotic(p):
    """Strong-regime expansion of log E|det(B_n - x)|^gamma, finite-n mu = n/N."""
    if p.x > 0:
        p.require_strong()
    gamma = p.real_gamma
    mu = p.mu
    log_one_minus_x2 = math.log1p(-p.x * p.x)
    value = (gamma * gamma / 8.0 * math.log(p.n)
             + gamma * p.n / 2.0 * math.log(mu)
             + p.alpha * gamma / 2.0 * (math.log1p(-mu) - log_one_minus_x2)
             + gamma / 4.0 * math.log(2.0 * math.pi)
             - log_barnes_g(1.0 + gamma / 2.0)
             + gamma * gamma / 4.0 * (0.5 * math.log1p(-mu) - log_one_minus_x2))
    return value.real if p.gamma_is_real else complex(value)


def rgamma_bulk(p):
    """log R_gamma(0) - (gamma/2)(gamma/2 + alpha) log(1 - x^2)."""
    g = p.real_gamma / 2.0
    return rgamma_zero(p) - g * (g + p.alpha) * math.log1p(-p.x * p.x)


def dlogr_asymptotic(p):
    """Leading slope (gamma/2)(gamma/2 + alpha) 2x/(1 - x^2) of log R_gamma."""
    g = p.real_gamma / 2.0
    return g * (g + p.alpha) * 2.0 * p.x / (1.0 - p.x * p.x)


# ---------------------------------------------------------------------------
# Central limit theorem
# ---------------------------------------------------------------------------

def kappa1(p):
    return p.n * math.log(p.mu) + p.alpha * (math.log1p(-p.mu) - math.log1p(-p.x * p.x))


def clt_standardize(logdet, p):
    if p.n < 2:
        raise ParameterRangeError('standardization needs n >= 2', n=p.n)
    return (np.asarray(logdet) - kappa1(p) / 2.0) / (0.5 * math.sqrt(math.log(p.n)))


def clt_moments(p):
    """
    Finite-n mean and variance of the standardized statistic, read off the
    first two gamma-derivatives of rgamma_asymptotic at gamma = 0. Both tend
    to (0, 1) only at rate 1/log n.
    """
    if p.n < 2:
        raise ParameterRangeError('standardization needs n >= 2', n=p.n)
    scale = 0.5 * math.sqrt(math.log(p.n))
    # d/dgamma [gamma/4 log 2pi - log G(1 + gamma/2)] = 1/4 at gamma = 0
    mean = 0.25 / scale
    variance = (0.25 * math.log(p.n) + 0.25 * (1.0 + np.euler_gamma)
                + 0.5 * (0.5 * math.log1p(-p.mu) - math.log1p(-p.x * p.x)))
    return mean, variance / scale ** 2


def clt_log_mgf(t, p, exact=True):
    """log E exp(t Y) for the standardized statistic Y; tends to t^2/2."""
    if p.n < 2:
        raise ParameterRangeError('standardization needs n >= 2', n=p.n)
    gamma = 2.0 * t / math.sqrt(math.log(p.n))
    q = p.replace(gamma=gamma)
    log_r = rgamma_exact(q) if exact else rgamma_asymptotic(q)
    return log_r - gamma * kappa1(p) / 2.0


# ---------------------------------------------------------------------------
# Comparison tables
# ---------------------------------------------------------------------------

def ring(curve, scale, count):
    """``count`` points of a traced curve, evenly spaced in parameter and scaled about 0."""
    index = np.linspace(0, curve.node_count, count, endpoint=False).astype(int)
    return scale * curve.points[index]


def region_table(p, points, curve=None, pair=None, convention=None):
    """Rows comparing pn_asymptotic with the exact monic P_n."""
    curve = curve or trace_gamma(p, 1.0)
    pair = pair or monic_pair(p, p.n)
    rows = []
    for z in points:
        z = complex(z)
        label = classify(z, p, curve)
        prediction = pn_asymptotic(z, p, label, convention)
        exact_log = cmath.log(complex(npoly.polyval(z, pair.P)))
        rows.append({
            'z_re': z.real, 'z_im': z.imag, 'region': label.name,
            'exact_log': exact_log.real, 'asy_log': prediction.log_value.real,
            'rel_err': prediction.relative_error(exact_log),
        })
    return rows


def integral_table(p, points, regime, t=None, convention=None):
    """Rows comparing integral_asymptotic with the direct Gamma_t quadrature."""
    curve = trace_gamma(p, t or contour_level(p))
    rows = []
    for z in points:
        z = complex(z)
        direct, _ = integral_direct(z, p, curve=curve)
        prediction = integral_asymptotic(z, p, regime, convention=convention)
        exact_log = cmath.log(direct)
        rows.append({
            'z_re': z.real, 'z_im': z.imag, 'region': regime,
            'exact_log': exact_log.real, 'asy_log': prediction.log_value.real,
            'rel_err': prediction.relative_error(exact_log),
        })
    return rows
