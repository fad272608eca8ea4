"""
Finite-n objects: contour moments, Toeplitz determinants, the monic
polynomial P_n with its partner q_n, norming constants, log R_gamma(x)
and the differential identity for d log R_gamma / dx.

Moments are ``m[j] = oint z^-j w(z) dz/(2iz)``, i.e. pi times the z^j
Laurent coefficient of w; the Toeplitz matrix of size k has entries
``oint z^(j-l) w = m[l - j]``.
"""
import cmath
import logging
import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import polynomial as npoly
from scipy import linalg

from .conf import settings
from .exceptions import (
    AccuracyError, ConditioningWarning, ContourPlacementError, ConvergenceError,
    IllConditionedError, ParameterRangeError, SingularMatrixError,
)
from .model import weight_contour
from .quadrature import DiscGrid, circle_moment, circle_moments, planar_gram, planar_gram_levels
from .specfun import log_barnes_g, log_gamma

logger = logging.getLogger(__name__)

LOG_TINY = math.log(1e-300)


def _check_degree(n):
    cfg = settings.ORTHOPOLY
    if n > cfg['DEGREE_CAP']:
        raise ParameterRangeError('degree above the double precision cap', n=n, cap=cfg['DEGREE_CAP'])
    if n > cfg['CONDITIONING_WARNING']:
        message = f'degree {n} is above {cfg["CONDITIONING_WARNING"]}; Toeplitz conditioning degrades'
        logger.warning(message)
        warnings.warn(message, ConditioningWarning, stacklevel=3)


def default_radius(p):
    """x^-1, the geometric mean of the branch points 1 and x^-2; 2 when x = 0."""
    return 2.0 if p.x == 0 else 1.0 / p.x


def negative_radius(p):
    return min(default_radius(p), settings.section('QUADRATURE', 'NEGATIVE_MOMENT_RADIUS_CAP'))


def _log_b(p, j):
    """log of Gamma(gamma/2 + j + 1) Gamma(alpha) / Gamma(gamma/2 + j + alpha + 1)."""
    g = p.real_gamma / 2.0
    return log_gamma(g + j + 1) + log_gamma(p.alpha) - log_gamma(g + j + p.alpha + 1)


# ---------------------------------------------------------------------------
# Moments and determinants
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MomentTable:
    params: object
    n_max: int
    values: np.ndarray = field(repr=False)
    errors: np.ndarray = field(repr=False)
    radius: float
    negative_radius: float

    def __getitem__(self, j):
        if abs(j) > self.n_max:
            raise IndexError(f'moment index {j} outside [-{self.n_max}, {self.n_max}]')
        return self.values[j + self.n_max]

    def take(self, indices):
        return self.values[np.asarray(indices) + self.n_max]

    def conjugate_residual(self):
        """For real gamma and x the integrand is Schwarz symmetric; the moments are real."""
        return float(np.max(np.abs(self.values.imag)) / np.max(np.abs(self.values)))

    def recompute(self, j):
        """Direct single-index recomputation, independent of the FFT table."""
        p = self.params
        radius = self.radius if j >= 0 else self.negative_radius
        value, _ = circle_moment(lambda z: weight_contour(z, p, check=False), radius, j)
        return value


def moments(p, n_max, radius=None):
    """Table of m[j] for j in [-n_max, n_max]."""
    _check_degree(n_max)
    radius = radius or default_radius(p)
    if p.x > 0 and not 1.0 < radius < p.outer_branch_point:
        raise ParameterRangeError('moment circle must separate [0, 1] from [x^-2, inf)', radius=radius, x=p.x)
    neg_radius = min(radius, negative_radius(p))

    def weight(z):
        return weight_contour(z, p, check=False)

    positive, pos_err = circle_moments(weight, radius, np.arange(0, n_max + 1))
    negative, neg_err = circle_moments(weight, neg_radius, -np.arange(n_max, 0, -1))
    values = np.concatenate([negative, positive])
    errors = np.concatenate([neg_err, pos_err])
    if p.gamma_is_real:
        values = values.real.astype(complex)
    logger.debug('moments: %s n_max=%d radius=%.6g', p, n_max, radius)
    return MomentTable(p, n_max, values, errors, radius, neg_radius)


@dataclass(frozen=True)
class ToeplitzChain:
    """log|T_k| and arg T_k for k = 1..n; index k - 1."""
    log_abs: np.ndarray
    phase: np.ndarray

    @property
    def n(self):
        return len(self.log_abs)

    def log_t(self, k):
        if k == 0:
            return 0j
        return complex(self.log_abs[k - 1], self.phase[k - 1])

    def value(self, k):
        return cmath.exp(self.log_t(k))


def toeplitz_matrix(mt, k):
    return linalg.toeplitz(mt.take(-np.arange(k)), mt.take(np.arange(k)))


def toeplitz_chain(mt, n):
    """T_1..T_n via an LU factorization of every leading principal matrix."""
    if n > mt.n_max + 1:
        raise ParameterRangeError('moment table too short', n=n, n_max=mt.n_max)
    log_abs = np.empty(n)
    phase = np.empty(n)
    for k in range(1, n + 1):
        lu, piv = linalg.lu_factor(toeplitz_matrix(mt, k), check_finite=True)
        diagonal = np.diag(lu)
        if np.any(diagonal == 0):
            raise SingularMatrixError('leading Toeplitz minor is singular', k=k)
        swaps = int(np.count_nonzero(piv != np.arange(k)))
        log_abs[k - 1] = math.fsum(np.log(np.abs(diagonal)))
        angle = math.fsum(np.angle(diagonal)) + math.pi * swaps
        phase[k - 1] = math.remainder(angle, 2.0 * math.pi)
        if log_abs[k - 1] < LOG_TINY:
            raise SingularMatrixError('leading Toeplitz minor underflows', k=k, log_abs=log_abs[k - 1])
    return ToeplitzChain(log_abs, phase)


# ---------------------------------------------------------------------------
# Polynomials
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PolyPair:
    """
    P monic (ascending powers of z) and Q monic in z^-1 (ascending powers
    of z^-1), with p_tilde = chi * P and q = chi_hat * Q.
    """
    n: int
    P: np.ndarray
    Q: np.ndarray
    chi: complex
    chi_hat: complex

    def p_tilde(self, z):
        return self.chi * npoly.polyval(z, self.P)

    def p_tilde_prime(self, z):
        return self.chi * npoly.polyval(z, npoly.polyder(self.P))

    def q_inverse(self, z):
        """q_n(z^-1)."""
        return self.chi_hat * npoly.polyval(1.0 / np.asarray(z, dtype=complex), self.Q)

    def q_inverse_prime(self, z):
        """d/dz q_n(z^-1)."""
        z = np.asarray(z, dtype=complex)
        return -self.chi_hat * npoly.polyval(1.0 / z, npoly.polyder(self.Q)) / (z * z)


def _solve_checked(lu_piv, matrix, rhs, trans):
    solution = linalg.lu_solve(lu_piv, rhs, trans=trans)
    applied = (matrix.T if trans else matrix) @ solution
    residual = np.linalg.norm(applied - rhs)
    scale = np.linalg.norm(matrix) * np.linalg.norm(solution) + np.linalg.norm(rhs)
    tolerance = settings.section('ORTHOPOLY', 'RESIDUAL_TOLERANCE')
    if residual > tolerance * scale:
        raise IllConditionedError('Toeplitz system residual too large', residual=residual, scale=scale)
    return solution


def monic_pair(p, n, mt=None, chain=None):
    """P_n, q_n and the norming constants chi_n, chi_hat_n from the moment table."""
    mt = mt or moments(p, n + 1)
    if n + 1 > mt.n_max + 1:
        raise ParameterRangeError('moment table too short', n=n, n_max=mt.n_max)
    chain = chain if chain is not None and chain.n >= n + 1 else toeplitz_chain(mt, n + 1)

    log_chi2 = chain.log_t(n) - chain.log_t(n + 1) - _log_b(p, n)
    chi = cmath.exp(0.5 * log_chi2)
    chi_hat = cmath.exp(0.5 * log_chi2 + _log_b(p, n))
    if p.gamma_is_real:
        chi, chi_hat = chi.real, chi_hat.real

    if n == 0:
        return PolyPair(0, np.ones(1, dtype=complex), np.ones(1, dtype=complex), chi, chi_hat)

    # A[k, i] = m[k - i]: P conditions; the transpose gives the Q conditions
    k = np.arange(n)
    matrix = linalg.toeplitz(mt.take(k), mt.take(-k))
    lu_piv = linalg.lu_factor(matrix)
    p_low = _solve_checked(lu_piv, matrix, -mt.take(k - n), trans=0)
    q_low = _solve_checked(lu_piv, matrix, -mt.take(n - k), trans=1)
    P = np.append(p_low, 1.0).astype(complex)
    Q = np.append(q_low, 1.0).astype(complex)
    return PolyPair(n, P, Q, chi, chi_hat)


def orthogonality_residual(pp, mt, p):
    """max_{k<n} |oint P_n z^-k w dz/(2iz)|, recomputed by direct quadrature."""
    worst = 0.0
    for k in range(pp.n):
        value, _ = circle_moment(
            lambda z: npoly.polyval(z, pp.P) * weight_contour(z, p, check=False), mt.radius, k,
        )
        worst = max(worst, abs(value))
    return worst


def biorthogonality(pp, mt, p):
    """oint p_tilde_n(z) q_n(z^-1) w dz/(2iz); equals 1."""
    value, _ = circle_moment(
        lambda z: pp.p_tilde(z) * pp.q_inverse(z) * weight_contour(z, p, check=False), mt.radius, 0,
    )
    return value


def planar_chi(p, n):
    """
    Norming constant of the degree-n planar orthonormal polynomial from the
    Cholesky factor of the monomial Gram matrix. Returns (chi, gram_residual).
    """
    if n > 12:
        raise ParameterRangeError('the planar Gram path is limited to n <= 12', n=n)
    coarse, fine = planar_gram_levels(p, n, DiscGrid.build(p))
    coarse = 0.5 * (coarse + coarse.conj().T)
    try:
        lower = np.linalg.cholesky(coarse)
    except np.linalg.LinAlgError as exc:
        raise AccuracyError('planar Gram matrix is not positive definite', n=n) from exc
    inverse = linalg.solve_triangular(lower, np.eye(n + 1), lower=True)
    check = inverse @ fine @ inverse.conj().T
    residual = float(np.max(np.abs(check - np.eye(n + 1))))
    if residual > 1e-6:
        raise AccuracyError('planar Gram orthonormalization residual too large', n=n, residual=residual)
    return 1.0 / lower[n, n].real, residual


def planar_monic(p, n):
    """
    Monic planar orthogonal polynomial of degree n (ascending powers of the
    unscaled variable) from the monomial Gram matrix. For x > 0 its rescaling
    x^-n P(x z) is the contour polynomial of ``monic_pair``.
    """
    if n > 12:
        raise ParameterRangeError('the planar Gram path is limited to n <= 12', n=n)
    gram = planar_gram(p, n)
    if n == 0:
        return np.ones(1, dtype=complex)
    # sum_i c_i <z^i, z^k> = -<z^n, z^k> for k < n
    low = linalg.solve(gram[:n, :n].T, -gram[n, :n])
    return np.append(low, 1.0).astype(complex)


def poly_zeros(pp):
    """Zeros of P_n: companion eigenvalues plus one Newton step."""
    if pp.n < 1:
        raise ParameterRangeError('poly_zeros needs degree >= 1')
    try:
        roots = linalg.eigvals(npoly.polycompanion(pp.P))
    except linalg.LinAlgError as exc:
        raise ConvergenceError('companion eigenvalues did not converge', n=pp.n) from exc
    derivative = npoly.polyder(pp.P)
    values = npoly.polyval(roots, pp.P)
    slopes = npoly.polyval(roots, derivative)
    step = np.divide(values, slopes, out=np.zeros_like(values), where=slopes != 0)
    polished = roots - step
    better = np.abs(npoly.polyval(polished, pp.P)) < np.abs(values)
    return np.sort_complex(np.where(better, polished, roots))


# ---------------------------------------------------------------------------
# log R_gamma(x)
# ---------------------------------------------------------------------------

def _gamma_product_terms(p):
    g = p.real_gamma / 2.0
    j = np.arange(p.n, dtype=float)
    terms = (log_gamma(g + j + 1) - log_gamma(g + j + p.alpha + 1)
             + log_gamma(j + p.alpha + 1) - log_gamma(j + 1))
    return terms


def _sum(terms):
    terms = np.asarray(terms)
    if np.iscomplexobj(terms):
        return complex(math.fsum(terms.real), math.fsum(terms.imag))
    return math.fsum(terms)


def rgamma_zero(p):
    """log R_gamma(0) = log prod Gamma(g+j+1) Gamma(j+alpha+1) / (Gamma(j+1) Gamma(g+j+alpha+1))."""
    return _sum(_gamma_product_terms(p))


def rgamma_barnes(p):
    """log R_gamma(0) through Barnes G values."""
    g = p.real_gamma / 2.0
    n, a = p.n, p.alpha
    return (log_barnes_g(g + n + 1) - log_barnes_g(g + 1) - log_barnes_g(n + 1)
            + log_barnes_g(a + n + 1) - log_barnes_g(a + 1)
            + log_barnes_g(g + a + 1) - log_barnes_g(g + a + n + 1))


def rgamma_exact(p, mt=None, chain=None):
    """
    log R_gamma(x) = log T_n - n log pi + log R_gamma(0).

    Real for real gamma, complex otherwise.
    """
    mt = mt or moments(p, p.n)
    chain = chain or toeplitz_chain(mt, p.n)
    log_t = chain.log_t(p.n)
    if p.gamma_is_real:
        if abs(log_t.imag) > 1e-8:
            logger.warning('T_%d has phase %.3e for real gamma', p.n, log_t.imag)
        log_t = log_t.real
    return log_t - p.n * math.log(math.pi) + rgamma_zero(p)


def tn_from_chi(chis, p):
    """log T_n from chi_0..chi_{n-1}: T_{j+1} = T_j / (chi_j^2 B_j)."""
    total = 0j
    for j, chi in enumerate(chis):
        total += -2.0 * cmath.log(chi) - _log_b(p, j)
    return total.real if p.gamma_is_real else total


# ---------------------------------------------------------------------------
# Differential identity
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DiffIdReport:
    value: float
    convention: str
    value_main: complex
    value_appendix: complex
    bracket: complex
    term_q: complex
    term_p: complex
    term_dq: complex
    i12: complex
    i22: complex
    bulk_slope: float

    def as_dict(self):
        return {name: getattr(self, name) for name in self.__dataclass_fields__}


def diffid_rhs(p, mt=None):
    """
    Right side of the differential identity at u = x^-2, i.e. d log R_gamma / dx.

    I12 and I22 are computed on the moment circle |z| = 1/x, which keeps u
    outside. Both prefactors gamma/2 + alpha and gamma/2 + alpha - 1 are
    reported; ORTHOPOLY['DIFFID_PREFACTOR'] picks the returned value.
    """
    if p.x == 0:
        raise ParameterRangeError('the differential identity needs x > 0')
    n = p.n
    u = 1.0 / (p.x * p.x)
    mt = mt or moments(p, n + 1)
    radius = mt.radius
    if abs(u - radius) < 1e-3:
        raise ContourPlacementError('u = x^-2 is too close to the integration circle', u=u, radius=radius)
    pp = monic_pair(p, n, mt)

    def w(z):
        return weight_contour(z, p, check=False)

    i12, _ = circle_moment(lambda z: z ** (1 - n) * pp.p_tilde(z) / (u - z) * w(z), radius, 0)
    i22, _ = circle_moment(lambda z: pp.q_inverse(z) / (u - z) * w(z), radius, 0)

    term_q = -n * u ** (n + 1) * complex(pp.q_inverse(u)) * i12
    term_p = -n * u + u ** 3 * complex(pp.p_tilde_prime(u)) * i22
    term_dq = -u ** (n + 2) * complex(pp.q_inverse_prime(u)) * i12
    bracket = term_q + term_p + term_dq

    g = p.real_gamma / 2.0
    value_main = -2.0 * p.x * (g + p.alpha) * bracket
    value_appendix = -2.0 * p.x * (g + p.alpha - 1.0) * bracket
    convention = settings.section('ORTHOPOLY', 'DIFFID_PREFACTOR')
    chosen = value_main if convention == 'main' else value_appendix
    if p.gamma_is_real:
        chosen = chosen.real
    bulk = g * (g + p.alpha) * 2.0 * p.x / (1.0 - p.x * p.x)
    return DiffIdReport(
        value=chosen, convention=convention, value_main=value_main, value_appendix=value_appendix,
        bracket=bracket, term_q=term_q, term_p=term_p, term_dq=term_dq, i12=i12, i22=i22,
        bulk_slope=bulk.real if p.gamma_is_real else bulk,
    )


def finite_difference_slope(p, step=1e-4):
    """Centred difference of rgamma_exact in x."""
    upper = rgamma_exact(p.replace(x=p.x + step))
    lower = rgamma_exact(p.replace(x=p.x - step))
    return (upper - lower) / (2.0 * step)
