"""
Model parameters, weights and the potential phi.

Branch conventions are fixed here and nowhere else:

* ``log z`` has its cut on (-inf, 0];
* ``(1 - x^2 z)^p`` is principal, cut on [x^-2, inf);
* ``h_gamma(z) = exp(gamma/2 * log(1 - 1/z))`` has its cut on [0, 1] and
  tends to 1 at infinity.
"""
import logging
import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .conf import settings
from .exceptions import DomainError, ParameterRangeError, StrongRegimeError

logger = logging.getLogger(__name__)

PHI_VARIANTS = (
    ('plain', 'log z + c log(1 - x^2 z)'),
    ('shifted', 'phi(z) - ell(r)'),
    ('tilde', 'c replaced by c + gamma / (2n)'),
)


class BranchConvention:
    """The three complex-power conventions used by every module."""

    LOG_CUT = '(-inf, 0]'
    POWER_CUT = '[x^-2, inf)'
    H_CUT = '[0, 1]'

    @staticmethod
    def log(z):
        return np.log(z)

    @staticmethod
    def power_one_minus(x, z, p):
        """(1 - x^2 z)^p, principal branch."""
        return np.exp(p * np.log(1.0 - x * x * z))

    @staticmethod
    def log_one_minus(x, z):
        return np.log(1.0 - x * x * z)

    @staticmethod
    def h(z, gamma):
        """h_gamma(z) = ((z - 1)/z)^(gamma/2) with cut [0, 1]."""
        return np.exp(0.5 * gamma * np.log(1.0 - 1.0 / z))

    @staticmethod
    def log_h(z, gamma):
        return 0.5 * gamma * np.log(1.0 - 1.0 / z)


@dataclass(frozen=True)
class ModelParams:
    """
    Parameter pack (n, N, gamma, x). alpha = N - n may be real when the
    pack is built with ``from_alpha``.
    """
    n: int
    N: float
    gamma: complex = 0.0
    x: float = 0.0
    _alpha: float = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise ParameterRangeError('n must be a positive integer', n=self.n)
        if not self.N > self.n:
            raise ParameterRangeError('N must exceed n', n=self.n, N=self.N)
        if not 0.0 <= self.x < 1.0:
            raise ParameterRangeError('x must lie in [0, 1)', x=self.x)
        if complex(self.gamma).real <= -2.0:
            raise ParameterRangeError('Re(gamma) must exceed -2', gamma=complex(self.gamma))
        object.__setattr__(self, 'n', int(self.n))
        object.__setattr__(self, 'gamma', complex(self.gamma))
        object.__setattr__(self, 'x', float(self.x))
        if self._alpha is None:
            object.__setattr__(self, '_alpha', self.N - self.n)

    @classmethod
    def from_alpha(cls, n, alpha, gamma=0.0, x=0.0):
        if not alpha > 0:
            raise ParameterRangeError('alpha must be positive', alpha=alpha)
        return cls(n=n, N=n + alpha, gamma=gamma, x=x, _alpha=alpha)

    def __str__(self):
        return f'n={self.n}, N={self.N}, gamma={self.gamma_str}, x={self.x}'

    def replace(self, **changes):
        """Copy with some of n, N, alpha, gamma, x changed; alpha is kept unless N is given."""
        values = {'n': self.n, 'gamma': self.gamma, 'x': self.x}
        if 'N' in changes:
            values.update(changes)
            return ModelParams(**values)
        values['alpha'] = self.alpha
        values.update(changes)
        return ModelParams.from_alpha(**values)

    @property
    def gamma_str(self):
        g = self.gamma
        return f'{g.real:g}' if g.imag == 0 else f'{g.real:g}{g.imag:+g}j'

    @property
    def alpha(self):
        return self._alpha

    @property
    def gamma_is_real(self):
        return self.gamma.imag == 0.0

    @property
    def real_gamma(self):
        """gamma as a float when it is real, else the complex value."""
        return self.gamma.real if self.gamma_is_real else self.gamma

    @property
    def mu(self):
        return self.n / self.N

    @property
    def c(self):
        return self.alpha / self.n

    @property
    def mu_tilde(self):
        """1/(1 + c); coincides with mu at finite n."""
        return 1.0 / (1.0 + self.c)

    @property
    def c_tilde(self):
        return self.c + self.real_gamma / (2 * self.n)

    @property
    def exponent(self):
        """alpha + gamma/2, the power of (1 - x^2 z) in the contour weight."""
        return self.alpha + 0.5 * self.real_gamma

    @property
    def outer_branch_point(self):
        return math.inf if self.x == 0 else 1.0 / (self.x * self.x)

    @cached_property
    def z0(self):
        if self.x == 0:
            return math.inf
        return 1.0 / (self.x * self.x * (1.0 + self.c))

    @property
    def is_strong(self):
        return self.z0 > 1.0

    def require_strong(self):
        if not self.is_strong:
            raise StrongRegimeError(
                'saddle point z0 must exceed 1 (x^2 (1 + c) < 1)', x=self.x, c=self.c, z0=self.z0,
            )

    def ell(self, r):
        if not 0.0 < r < self.outer_branch_point:
            raise ParameterRangeError('ell(r) needs 0 < r < x^-2', r=r, x=self.x)
        return math.log(r) + self.c * math.log1p(-self.x * self.x * r)


def _out(values, scalar):
    return complex(values) if scalar else values


def _check_cuts(z, p, on_unit_interval, tol=None):
    tol = settings.section('GEOMETRY', 'CUT_TOLERANCE') if tol is None else tol
    z = np.asarray(z, dtype=complex)
    near_axis = np.abs(z.imag) <= tol * (1.0 + np.abs(z))
    bad = np.zeros(z.shape, dtype=bool)
    if on_unit_interval:
        bad |= near_axis & (z.real >= -tol) & (z.real <= 1.0 + tol)
    else:
        bad |= near_axis & (z.real <= tol)
    if p.x > 0:
        bad |= near_axis & (z.real >= p.outer_branch_point * (1.0 - tol))
    if np.any(bad):
        culprit = complex(z[bad].flat[0])
        raise DomainError('argument lies on a branch cut', z=culprit, x=p.x)


def weight_contour(z, p, check=True):
    """w(z) = (1 - x^2 z)^(alpha + gamma/2) * h_gamma(z)."""
    scalar = np.isscalar(z)
    z = np.asarray(z, dtype=complex)
    if check:
        _check_cuts(z, p, on_unit_interval=True)
    log_w = p.exponent * BranchConvention.log_one_minus(p.x, z) + BranchConvention.log_h(z, p.real_gamma)
    return _out(np.exp(log_w), scalar)


def h_gamma(z, gamma):
    scalar = np.isscalar(z)
    values = BranchConvention.h(np.asarray(z, dtype=complex), gamma)
    return _out(values, scalar)


def weight_planar(z, p):
    """Planar density (1 - |z|^2)^(alpha - 1) |z - x|^gamma on the open unit disc, 0 outside."""
    scalar = np.isscalar(z)
    z = np.asarray(z, dtype=complex)
    modulus2 = (z * z.conjugate()).real
    inside = modulus2 < 1.0
    density = np.zeros(z.shape, dtype=float if p.gamma_is_real else complex)
    zi = z[inside]
    with np.errstate(divide='ignore'):
        density[inside] = (1.0 - modulus2[inside]) ** (p.alpha - 1.0) * np.abs(zi - p.x) ** p.real_gamma
    if scalar:
        return density.item()
    return density


def phi(z, p, variant='plain', r=None):
    """phi(z) = log z + c log(1 - x^2 z), optionally shifted by ell(r) or with c -> c + gamma/(2n)."""
    scalar = np.isscalar(z)
    z = np.asarray(z, dtype=complex)
    _check_cuts(z, p, on_unit_interval=False)
    c = _variant_c(p, variant)
    values = np.log(z) + c * BranchConvention.log_one_minus(p.x, z)
    if variant == 'shifted' or (variant == 'tilde' and r is not None):
        if r is None:
            raise ParameterRangeError('shifted phi needs r')
        values = values - (math.log(r) + c * math.log1p(-p.x * p.x * r))
    return _out(values, scalar)


def phi_prime(z, p, variant='plain'):
    scalar = np.isscalar(z)
    z = np.asarray(z, dtype=complex)
    c = _variant_c(p, variant)
    x2 = p.x * p.x
    return _out(1.0 / z - c * x2 / (1.0 - x2 * z), scalar)


def phi_second(z, p, variant='plain'):
    scalar = np.isscalar(z)
    z = np.asarray(z, dtype=complex)
    c = _variant_c(p, variant)
    x2 = p.x * p.x
    return _out(-1.0 / (z * z) - c * x2 * x2 / (1.0 - x2 * z) ** 2, scalar)


def re_phi(z, p, variant='plain'):
    """Re phi, continuous across the cuts; -inf at z = 0 and z = x^-2."""
    z = np.asarray(z, dtype=complex)
    c = _variant_c(p, variant)
    with np.errstate(divide='ignore'):
        return np.log(np.abs(z)) + np.real(c) * np.log(np.abs(1.0 - p.x * p.x * z))


def phi_prime_at_one(p):
    """phi'(1) = (1 - x^2/mu_tilde)/(1 - x^2)."""
    x2 = p.x * p.x
    return (1.0 - x2 / p.mu_tilde) / (1.0 - x2)


def saddle_and_ell(p, r):
    """Return (z0, ell(r)); z0 is inf when x = 0."""
    if r >= p.outer_branch_point:
        raise ParameterRangeError('r must be below x^-2', r=r, x=p.x)
    return p.z0, p.ell(r)


def _variant_c(p, variant):
    if variant in ('plain', 'shifted'):
        return p.c
    if variant == 'tilde':
        return p.c_tilde
    raise ParameterRangeError(f'unknown phi variant {variant!r}', choices=[v for v, _ in PHI_VARIANTS])
