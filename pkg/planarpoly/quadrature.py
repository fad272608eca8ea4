"""
Numerical integration.

* Spectral trapezoid rule on circles and on traced closed curves, with
  node doubling as the error estimate.
* Planar quadrature on the unit disc for (1 - |z|^2)^(alpha-1) |z - x|^gamma:
  Gauss-Jacobi in u = r^2 times an angular trapezoid when the charge is
  absent, and a polar rule centred at the charge otherwise.

Sums are taken in node order with math.fsum on real and imaginary parts so
results do not depend on how node values were produced.
"""
import logging
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numpy.polynomial import polynomial as npoly
from scipy.special import roots_jacobi

from .conf import settings
from .exceptions import AccuracyError, ConvergenceError, ValidationError

logger = logging.getLogger(__name__)


def fsum_complex(values):
    values = np.asarray(values, dtype=complex).ravel()
    return complex(math.fsum(values.real), math.fsum(values.imag))


@dataclass(frozen=True)
class ContourGrid:
    """Nodes z(t_k) and derivatives z'(t_k) of a 2*pi-periodic parametrization."""
    points: np.ndarray
    derivatives: np.ndarray
    node_count: int
    radius: float = None

    @classmethod
    def circle(cls, radius, node_count):
        theta = 2.0 * np.pi * np.arange(node_count) / node_count
        points = radius * np.exp(1j * theta)
        return cls(points=points, derivatives=1j * points, node_count=node_count, radius=radius)

    def refined(self):
        if self.radius is None:
            raise ValueError('only circles can refine themselves; retrace the curve instead')
        return ContourGrid.circle(self.radius, 2 * self.node_count)

    @property
    def weight(self):
        return 2.0 * np.pi / self.node_count


def _quad_settings():
    cfg = settings.QUADRATURE
    return cfg['ANGULAR_NODES'], cfg['MAX_NODES'], cfg['TOLERANCE']


# ---------------------------------------------------------------------------
# Circles
# ---------------------------------------------------------------------------

def _circle_sum(f, grid, j):
    z = grid.points
    values = f(z) * np.exp(-j * np.log(z))
    # dz/(2iz) = dtheta/2 on a circle
    return fsum_complex(values) * (np.pi / grid.node_count), float(np.sum(np.abs(values))) * np.pi / grid.node_count


def circle_moment(f, radius, j, grid=None, tol=None):
    """
    oint z^-j f(z) dz/(2iz) on |z| = radius.

    Returns (value, error estimate). The node count doubles until two
    consecutive values agree to ``tol`` relative to the integrand scale.
    """
    start, max_nodes, default_tol = _quad_settings()
    tol = default_tol if tol is None else tol
    if grid is None:
        nodes = start
        while nodes < 4 * abs(j) + 16:
            nodes *= 2
        grid = ContourGrid.circle(radius, nodes)
    previous, _ = _circle_sum(f, grid, j)
    while True:
        grid = grid.refined()
        value, scale = _circle_sum(f, grid, j)
        error = abs(value - previous)
        logger.debug('circle_moment j=%d nodes=%d error=%.3e', j, grid.node_count, error)
        if error <= tol * max(scale, abs(value)):
            return value, error
        if grid.node_count >= max_nodes:
            raise ConvergenceError('circle moment did not converge', j=j, radius=radius,
                                   nodes=grid.node_count, error=error)
        previous = value


def circle_moments(f, radius, indices, tol=None):
    """
    Vectorized circle_moment for many indices via one FFT per node level.

    Returns (values, errors) aligned with ``indices``.
    """
    start, max_nodes, default_tol = _quad_settings()
    tol = default_tol if tol is None else tol
    indices = np.asarray(indices, dtype=int)
    nodes = start
    while nodes < 4 * int(np.max(np.abs(indices))) + 16:
        nodes *= 2

    def level(node_count):
        grid = ContourGrid.circle(radius, node_count)
        samples = f(grid.points)
        spectrum = np.fft.fft(samples) / node_count
        values = np.pi * spectrum[indices % node_count] * radius ** (-indices.astype(float))
        scale = np.pi * np.mean(np.abs(samples)) * radius ** (-indices.astype(float))
        return values, scale

    previous, _ = level(nodes)
    while True:
        nodes *= 2
        values, scale = level(nodes)
        errors = np.abs(values - previous)
        worst = float(np.max(errors / np.maximum(scale, np.abs(values))))
        logger.debug('circle_moments radius=%.6g nodes=%d worst=%.3e', radius, nodes, worst)
        if worst <= tol:
            return values, errors
        if nodes >= max_nodes:
            raise ConvergenceError('circle moments did not converge', radius=radius,
                                   nodes=nodes, error=worst)
        previous = values


# ---------------------------------------------------------------------------
# Closed curves
# ---------------------------------------------------------------------------

def _curve_sum(f, grid):
    values = f(grid.points) * grid.derivatives
    return fsum_complex(values) * grid.weight, float(np.sum(np.abs(values))) * grid.weight


def contour_integral(f, curve, tol=None):
    """
    oint f(s) ds over a closed curve.

    ``curve`` is a ContourGrid or any object with ``grid`` and ``refined()``
    (a traced level curve). Returns (value, error estimate).
    """
    _, max_nodes, default_tol = _quad_settings()
    tol = default_tol if tol is None else tol
    grid = curve if isinstance(curve, ContourGrid) else curve.grid
    previous, _ = _curve_sum(f, grid)
    while True:
        curve = curve.refined()
        grid = curve if isinstance(curve, ContourGrid) else curve.grid
        value, scale = _curve_sum(f, grid)
        error = abs(value - previous)
        logger.debug('contour_integral nodes=%d error=%.3e', grid.node_count, error)
        if error <= tol * max(scale, abs(value)):
            return value, error
        if grid.node_count >= max_nodes:
            raise ConvergenceError('contour integral did not converge', nodes=grid.node_count, error=error)
        previous = value


# ---------------------------------------------------------------------------
# Unit disc
# ---------------------------------------------------------------------------

@lru_cache(maxsize=64)
def _jacobi_unit(count, a, b):
    """Nodes/weights for int_0^1 s^b (1 - s)^a g(s) ds."""
    t, w = roots_jacobi(count, a, b)
    return (t + 1.0) / 2.0, w / 2.0 ** (a + b + 1.0)


@dataclass(frozen=True)
class DiscGrid:
    """
    Tensor rule on the unit disc.

    ``radial_nodes``/``radial_weights`` integrate int_0^1 f(u) (1 - u)^(alpha-1) u^b du
    (b = gamma/2 when the charge sits at the origin, else 0); ``angular_count``
    equispaced angles complete the rule. When the charge is away from the origin
    the nodes are laid out around z = x instead (``charge_centred``).
    """
    points: np.ndarray
    weights: np.ndarray
    radial_nodes: np.ndarray
    radial_weights: np.ndarray
    angular_count: int
    charge_centred: bool

    @classmethod
    def build(cls, p, radial_count=None, angular_count=None):
        if not p.gamma_is_real:
            raise ValidationError('planar quadrature needs a real gamma', gamma=p.gamma)
        cfg = settings.QUADRATURE
        radial_count = radial_count or cfg['RADIAL_NODES']
        angular_count = angular_count or cfg['ANGULAR_NODES']
        gamma = p.gamma.real
        alpha = float(p.alpha)
        theta = 2.0 * np.pi * np.arange(angular_count) / angular_count

        if gamma == 0.0 or p.x == 0.0:
            u, wu = _jacobi_unit(radial_count, alpha - 1.0, gamma / 2.0 if p.x == 0.0 else 0.0)
            r = np.sqrt(u)
            points = (r[:, None] * np.exp(1j * theta)[None, :]).ravel()
            # d^2z = (1/2) du dtheta
            weights = np.repeat(0.5 * wu * (2.0 * np.pi / angular_count), angular_count)
            return cls(points, weights, u, wu, angular_count, False)

        # z = x + s R(psi) e^{i psi}; 1 - |z|^2 = (R - rho)(R' + rho)
        x = p.x
        root = np.sqrt(1.0 - (x * np.sin(theta)) ** 2)
        near = -x * np.cos(theta) + root
        far = x * np.cos(theta) + root
        s, ws = _jacobi_unit(radial_count, alpha - 1.0, gamma + 1.0)
        rho = near[None, :] * s[:, None]
        points = (x + rho * np.exp(1j * theta)[None, :]).ravel()
        weights = (ws[:, None] * near[None, :] ** (gamma + alpha + 1.0)
                   * (far[None, :] + rho) ** (alpha - 1.0)
                   * (2.0 * np.pi / angular_count)).ravel()
        return cls(points, weights, s, ws, angular_count, True)

    def refined(self, p):
        return DiscGrid.build(p, 2 * len(self.radial_nodes), 2 * self.angular_count)


def _monomials(points, degree):
    return points[None, :] ** np.arange(degree + 1)[:, None]


def _gram_on(grid, degree):
    basis = _monomials(grid.points, degree)
    weighted = basis * grid.weights[None, :]
    return weighted @ basis.conj().T


def planar_gram_levels(p, degree, grid=None):
    """Gram matrices of the monomials at the given resolution and at the refined one."""
    grid = grid or DiscGrid.build(p)
    return _gram_on(grid, degree), _gram_on(grid.refined(p), degree)


def planar_gram(p, degree, grid=None, tol=1e-9):
    """
    Gram matrix G[j, k] = int z^j conj(z^k) dmu for j, k <= degree.

    Evaluated at two resolutions; raises AccuracyError when they disagree.
    """
    coarse, fine = planar_gram_levels(p, degree, grid)
    scale = np.sqrt(np.outer(np.abs(np.diag(fine)), np.abs(np.diag(fine))))
    worst = float(np.max(np.abs(fine - coarse) / scale))
    if worst > tol:
        raise AccuracyError('planar quadrature levels disagree', degree=degree, error=worst)
    return fine


def planar_inner_product(pcoef, qcoef, p, grid=None, tol=1e-9):
    """
    int_D p(z) conj(q(z)) dmu(z), coefficients in ascending powers.

    Returns the value from the finer of two resolutions; AccuracyError when
    the two disagree beyond ``tol`` relative to int |p q| dmu.
    """
    grid = grid or DiscGrid.build(p)

    def evaluate(g):
        pv = npoly.polyval(g.points, np.asarray(pcoef, dtype=complex))
        qv = npoly.polyval(g.points, np.asarray(qcoef, dtype=complex))
        w = g.weights
        return fsum_complex(pv * np.conj(qv) * w), float(np.sum(np.abs(pv * qv * w)))

    coarse, _ = evaluate(grid)
    fine, scale = evaluate(grid.refined(p))
    if abs(fine - coarse) > tol * max(scale, 1e-300):
        raise AccuracyError('planar inner product levels disagree', error=abs(fine - coarse), scale=scale)
    return fine
