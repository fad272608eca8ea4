"""
sigma-Painleve V in the weak regime x^2 = 1 - v/n.

The sigma form

    (u s'')^2 = (s - u s' + 2 s'^2 + 2a s')^2 - 4 s'^2 (s' + a + b)(s' + a - b)

is integrated as the first-order system (s, p = s', S = u s'') with
S' = F_p / (2u), obtained by differentiating S^2 = F along solutions. The
branch of S is fixed once, by the large-u initialization, and S^2 - F is
conserved, so its drift is the residual of the equation itself.
"""
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy import integrate

from .conf import settings
from .exceptions import (
    AccuracyError, ConvergenceError, PainlevePoleError, ParameterRangeError, SignAmbiguityError,
)
from .model import ModelParams
from .orthopoly import rgamma_exact, rgamma_zero
from .specfun import incomplete_gamma, log_barnes_g, rgamma

logger = logging.getLogger(__name__)

SERIES_TERMS = 40


def _is_negative_integer(value):
    return value < 0 and value == math.floor(value)


@dataclass(frozen=True)
class PVParams:
    """a = (alpha + gamma)/2, b = alpha/2 for real alpha and gamma."""
    alpha: float
    gamma: float

    def __post_init__(self):
        g = self.gamma / 2.0
        for name, value in (('alpha + gamma/2', self.alpha + g), ('gamma/2', g)):
            if _is_negative_integer(value):
                raise ParameterRangeError(f'{name} must avoid -1, -2, ...', alpha=self.alpha, gamma=self.gamma)
        # a^2 - b^2 = (gamma/2)(gamma/2 + alpha), checked in exact arithmetic
        alpha, gamma = Fraction(self.alpha), Fraction(self.gamma)
        a, b = (alpha + gamma) / 2, alpha / 2
        assert a * a - b * b - (gamma / 2) * (gamma / 2 + alpha) == 0

    @property
    def a(self):
        return (self.alpha + self.gamma) / 2.0

    @property
    def b(self):
        return self.alpha / 2.0

    @property
    def small_u_limit(self):
        """a^2 - b^2, the value of sigma at u = 0."""
        g = self.gamma / 2.0
        return g * (g + self.alpha)

    @property
    def tail_constant(self):
        """-1/(Gamma(a - b) Gamma(a + b)); zero when gamma = 0."""
        return -(rgamma(self.a - self.b) * rgamma(self.a + self.b)).real


@dataclass(frozen=True)
class SigmaSolution:
    params: PVParams
    v: float
    u_max: float
    u: np.ndarray
    sigma: np.ndarray
    sigma_prime: np.ndarray
    s: np.ndarray
    residual: float
    pole_flags: tuple = ()
    dense: object = field(default=None, repr=False, compare=False)
    # the small-u constant C(a, b) is not modelled; only sigma(0) = a^2 - b^2 is checked
    small_u_check: str = 'constant term only'

    def __call__(self, u):
        """(sigma, sigma') on [v, u_max] from the dense output."""
        if self.dense is None:
            zeros = np.zeros_like(np.asarray(u, dtype=float))
            return zeros, zeros
        state = self.dense(u)
        return state[0], state[1]

    def residuals(self):
        return pv_residual(self.params, self.u, self.sigma, self.sigma_prime, self.s)


def _energy(pv, u, sigma, p):
    return sigma - u * p + 2.0 * p * p + 2.0 * pv.a * p


def pv_rhs(pv, u, sigma, p):
    """F(u, sigma, sigma'), the right side of the sigma form."""
    a, b = pv.a, pv.b
    e = _energy(pv, u, sigma, p)
    return e * e - 4.0 * p * p * (p + a + b) * (p + a - b)


def _rhs_dp(pv, u, sigma, p):
    a, b = pv.a, pv.b
    e = _energy(pv, u, sigma, p)
    return (2.0 * e * (4.0 * p + 2.0 * a - u)
            - 8.0 * p * ((p + a) ** 2 - b * b) - 8.0 * p * p * (p + a))


def pv_residual(pv, u, sigma, p, s):
    """|(u sigma'')^2 - F| relative to the size of the two competing terms."""
    a, b = pv.a, pv.b
    e = _energy(pv, u, sigma, p)
    quartic = 4.0 * p * p * (p + a + b) * (p + a - b)
    return np.abs(s * s - (e * e - quartic)) / (1.0 + e * e + np.abs(quartic))


def _mul(x, y, order):
    return np.convolve(x, y)[:order + 1]


def _shift(x, order, by=1):
    out = np.zeros(order + 1)
    out[by:] = x[:order + 1 - by]
    return out


def _sqrt_series(q, order):
    """Power series square root with r_0 = sqrt(q_0) > 0."""
    r = np.zeros(order + 1)
    r[0] = math.sqrt(q[0])
    for j in range(1, order + 1):
        r[j] = (q[j] - np.dot(r[1:j], r[j - 1:0:-1])) / (2.0 * r[0])
    return r


def _ratio_defect(l, a, c0, order):
    """
    Coefficient of t^order in  L^2 + dL/du - sqrt((t - L + 2a t L)^2 - 4 c0 t^2 L^2),
    t = 1/u, L = sigma'/sigma; the equation divided by sigma^2 after dropping
    the exponentially small terms.
    """
    L = l[:order + 1]
    t = np.zeros(order + 1)
    if order >= 1:
        t[1] = 1.0
    d_du = -_shift(np.arange(order + 1) * L, order)
    lhs = _mul(L, L, order) + d_du
    inner = t - L + 2.0 * a * _shift(L, order)
    q = _mul(inner, inner, order) - 4.0 * c0 * _shift(_mul(L, L, order), order, 2)
    return (lhs - _sqrt_series(q, order))[order]


@lru_cache(maxsize=64)
def ratio_coefficients(pv, terms=SERIES_TERMS):
    """
    l_k with sigma'/sigma ~ sum_k l_k u^-k on the decaying solution, solved
    order by order; l_0 = -1 and l_1 = 2a - 1.
    """
    a, c0 = pv.a, pv.small_u_limit
    l = np.zeros(terms + 1)
    l[0] = -1.0
    for k in range(1, terms + 1):
        # the t^k defect depends on l_k with slope -1
        l[k] = _ratio_defect(l, a, c0, k)
    return l


@lru_cache(maxsize=64)
def large_u_coefficients(pv, terms=SERIES_TERMS):
    """c_k of sigma ~ K u^(2a-1) e^-u sum_k c_k u^-k, c_0 = 1."""
    m = ratio_coefficients(pv, terms).copy()
    m[0] += 1.0
    m[1] -= 2.0 * pv.a - 1.0
    c = np.zeros(terms)
    c[0] = 1.0
    for j in range(1, terms):
        # -j c_j = sum_{i >= 2} m_i c_{j+1-i}
        c[j] = -np.dot(m[2:j + 2], c[j - 1::-1]) / j
    return c


def _optimal_sum(terms):
    """Sum of an asymptotic series up to its smallest term."""
    stop = int(np.argmin(np.abs(terms[1:]))) + 1 if len(terms) > 1 else 0
    return math.fsum(terms[:stop + 1])


def asymptotic_state(pv, u):
    """
    (sigma, sigma', u sigma'') at large u from
    sigma ~ K u^(2a-1) e^-u sum_k c_k u^-k, K = -1/(Gamma(a-b) Gamma(a+b)).
    """
    t = 1.0 / u
    c = large_u_coefficients(pv)
    l = ratio_coefficients(pv)
    k = np.arange(len(l))
    ratio = _optimal_sum(l * t ** k)
    ratio_du = _optimal_sum(-k * l * t ** (k + 1))
    f = _optimal_sum(c * t ** np.arange(len(c)))
    sigma = pv.tail_constant * math.exp(-u) * u ** (2.0 * pv.a - 1.0) * f
    return sigma, ratio * sigma, u * sigma * (ratio_du + ratio * ratio)


def _initial_state(pv, u_max):
    sigma, p, s = asymptotic_state(pv, u_max)
    f = pv_rhs(pv, u_max, sigma, p)
    # project onto S^2 = F, keeping the sign of the asymptotic branch
    if f > 0:
        s = math.copysign(math.sqrt(f), s)
    return np.array([sigma, p, s])


def _check_range(v, u_max):
    if not v > 0:
        raise ParameterRangeError('v must be positive', v=v)
    if u_max < max(40.0, v + 30.0):
        raise ParameterRangeError('u_max must be at least max(40, v + 30)', v=v, u_max=u_max)


def sigma_solve(pv, v, u_max=None):
    """Integrate from u_max down to v with DOP853."""
    cfg = settings.PAINLEVE
    u_max = cfg['U_MAX'] if u_max is None else u_max
    _check_range(v, u_max)

    if pv.gamma == 0:
        u = np.array([u_max, v])
        zeros = np.zeros(2)
        return SigmaSolution(pv, v, u_max, u, zeros, zeros, zeros, 0.0)

    def system(u, y):
        sigma, p, s = y
        return [p, s / u, _rhs_dp(pv, u, sigma, p) / (2.0 * u)]

    threshold = cfg['POLE_THRESHOLD']

    def pole(u, y):
        return abs(y[0]) - threshold
    pole.terminal = True

    def branch(u, y):
        return y[2]

    y0 = _initial_state(pv, u_max)
    logger.debug('sigma_solve a=%.6g b=%.6g v=%.6g u_max=%.6g sigma0=%.3e', pv.a, pv.b, v, u_max, y0[0])
    result = integrate.solve_ivp(
        system, (u_max, v), y0, method='DOP853', rtol=cfg['RTOL'], atol=cfg['ATOL'],
        dense_output=True, events=(pole, branch),
    )
    if result.status == 1 and len(result.t_events[0]):
        u_pole = float(result.t_events[0][0])
        window = cfg['POLE_WINDOW']
        logger.warning('sigma blows up near u=%.6g (a=%.6g, b=%.6g)', u_pole, pv.a, pv.b)
        raise PainlevePoleError('sigma reaches the pole threshold', u=u_pole,
                                window_low=u_pole - window, window_high=u_pole + window, v=v)
    if not result.success:
        raise ConvergenceError('sigma-PV integration failed', reason=result.message, v=v)

    for u_cross, state in zip(result.t_events[1], result.y_events[1]):
        sigma, p, _ = state
        slope = _rhs_dp(pv, u_cross, sigma, p)
        if abs(slope) <= 1e-8 * (1.0 + abs(_energy(pv, u_cross, sigma, p))):
            raise SignAmbiguityError('u sigma\'\' touches zero without crossing', u=float(u_cross))

    sigma, p, s = result.y
    residuals = pv_residual(pv, result.t, sigma, p, s)
    worst = float(np.max(residuals))
    if worst > cfg['RESIDUAL_TOLERANCE']:
        raise AccuracyError('sigma-PV residual too large', residual=worst, v=v)
    return SigmaSolution(pv, v, u_max, result.t, sigma, p, s, worst, dense=result.sol)


def tail_integral(pv, u_max):
    """int_{u_max}^inf sigma/u du from the leading large-u form."""
    if pv.tail_constant == 0:
        return 0.0
    upper = incomplete_gamma(2.0 * pv.a - 1.0, u_max, 'upper').complex().real
    return pv.tail_constant * upper


def omega_integral(sol, v):
    """int_v^inf sigma(u)/u du."""
    if not sol.v <= v <= sol.u_max:
        raise ParameterRangeError('v lies outside the solved range', v=v, low=sol.v, high=sol.u_max)
    if sol.dense is None:
        return 0.0
    body, error = integrate.quad(lambda u: sol.dense(u)[0] / u, v, sol.u_max,
                                 limit=400, epsabs=1e-15, epsrel=1e-12)
    logger.debug('omega_integral body=%.12g error=%.2e', body, error)
    return body + tail_integral(sol.params, sol.u_max)


def rgamma_pv(alpha, gamma, v, n, u_max=None):
    """
    log of n^(gamma^2/4) v^(-(gamma/2)(gamma/2 + alpha)) exp(-int_v^inf sigma/u du),
    the weak-regime prediction for log R_gamma(x) with x^2 = 1 - v/n.
    """
    if gamma == 0:
        return 0.0
    pv = PVParams(alpha, gamma)
    integral = omega_integral(sigma_solve(pv, v, u_max), v)
    return gamma * gamma / 4.0 * math.log(n) - pv.small_u_limit * math.log(v) - integral


def product_constant(alpha, gamma):
    """log G(gamma/2 + alpha + 1) - log G(1 + gamma/2) - log G(alpha + 1)."""
    g = gamma / 2.0
    return log_barnes_g(g + alpha + 1.0) - log_barnes_g(1.0 + g) - log_barnes_g(alpha + 1.0)


def barnes_prefactor(alpha, gamma, n):
    """log of G(g+n+1) G(alpha+n+1) / (G(n+1) G(g+n+alpha+1)), g = gamma/2."""
    g = gamma / 2.0
    return (log_barnes_g(g + n + 1.0) + log_barnes_g(alpha + n + 1.0)
            - log_barnes_g(n + 1.0) - log_barnes_g(g + n + alpha + 1.0))


def weak_params(alpha, gamma, v, n):
    if not 0 < v < n:
        raise ParameterRangeError('need 0 < v < n', v=v, n=n)
    return ModelParams.from_alpha(n, alpha, gamma=gamma, x=math.sqrt(1.0 - v / n))


@dataclass(frozen=True)
class WeakRegimeReport:
    log_r: float
    log_dn: float
    log_prefactor: float
    prefactor_gap: float
    product_constant: float
    x: float


def dn_exact_weak(alpha, gamma, v, n):
    """
    Exact log R_gamma(x) at x = sqrt(1 - v/n) through the Toeplitz chain, with
    log D_n, the Barnes prefactor and its distance from -(alpha gamma/2) log n.
    """
    p = weak_params(alpha, gamma, v, n)
    if gamma == 0:
        return WeakRegimeReport(0.0, 0.0, 0.0, 0.0, 0.0, p.x)
    log_r = float(rgamma_exact(p))
    log_dn = log_r - float(rgamma_zero(p))
    prefactor = barnes_prefactor(alpha, gamma, n)
    return WeakRegimeReport(
        log_r=log_r,
        log_dn=log_dn,
        log_prefactor=prefactor,
        prefactor_gap=prefactor + alpha * gamma / 2.0 * math.log(n),
        product_constant=product_constant(alpha, gamma),
        x=p.x,
    )


@dataclass(frozen=True)
class WeakComparison:
    alpha: float
    gamma: float
    v: float
    n: int
    log_pv: float
    log_exact: float
    product_constant: float
    gap: float
    gap_with_constant: float

    def as_dict(self):
        return {name: getattr(self, name) for name in self.__dataclass_fields__}


def compare_weak(alpha, gamma, v, n, u_max=None):
    """|exp(prediction - exact) - 1| as printed and with the product constant restored."""
    exact = dn_exact_weak(alpha, gamma, v, n)
    predicted = rgamma_pv(alpha, gamma, v, n, u_max)
    return WeakComparison(
        alpha=alpha, gamma=gamma, v=v, n=n,
        log_pv=predicted, log_exact=exact.log_r, product_constant=exact.product_constant,
        gap=abs(math.expm1(predicted - exact.log_r)),
        gap_with_constant=abs(math.expm1(predicted + exact.product_constant - exact.log_r)),
    )


def omega_infinity(pv, u_min=None, u_max=None):
    """
    Omega(+inf) = lim_R [int_0^R (sigma - c0)/u du + c0 log R], c0 = a^2 - b^2,
    from a solve down to u_min; the piece on (0, u_min) uses sigma - c0 ~ linear.
    """
    u_min = settings.section('PAINLEVE', 'U_MIN') if u_min is None else u_min
    c0 = pv.small_u_limit
    sol = sigma_solve(pv, u_min, u_max)
    sigma_min = float(sol.sigma[-1])
    return omega_integral(sol, u_min) + c0 * math.log(u_min) + (sigma_min - c0)


def omega_infinity_closed(pv):
    """-log[G(alpha + gamma/2 + 1) G(1 + gamma/2) / G(gamma + alpha + 1)]."""
    g = pv.gamma / 2.0
    return -(log_barnes_g(pv.alpha + g + 1.0) + log_barnes_g(1.0 + g)
             - log_barnes_g(pv.gamma + pv.alpha + 1.0))


def solution_rows(sol):
    return [
        (u, sigma, sigma_prime, residual)
        for u, sigma, sigma_prime, residual
        in zip(sol.u, sol.sigma, sol.sigma_prime, sol.residuals())
    ]
