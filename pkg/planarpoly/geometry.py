"""
Level curves Re phi(z) = phi(r), the saddle point and region labels.

Each component is traced as a star-shaped curve around an anchor: 0 for the
inner curve, a point between its two real crossings for the outer one. A
ray at angle theta is solved for its first crossing, upper half plane only;
the lower half is the mirror image.
"""
import enum
import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .conf import settings
from .exceptions import AccuracyError, BracketError, ParameterRangeError
from .model import phi, phi_prime, phi_second, re_phi, saddle_and_ell
from .quadrature import ContourGrid

logger = logging.getLogger(__name__)

COMPONENTS = ('inner', 'outer')
SCAN_POINTS = 256


class Region(enum.Enum):
    EXT = 'ExtGamma1'
    INT = 'IntGamma1'
    NBHD_U = 'NbhdU'
    DISC = 'Disc1'

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class RegionLabel:
    region: Region
    distance: float
    scaled_offset: float

    @property
    def name(self):
        return self.region.value


@dataclass(frozen=True)
class SaddleReport:
    z0: float
    phi: float
    phi_second: float
    phi_prime: float


@dataclass(frozen=True)
class LevelCurve:
    params: object
    r: float
    component: str
    variant: str
    anchor: float
    points: np.ndarray
    derivatives: np.ndarray
    residual: float

    @property
    def node_count(self):
        return len(self.points)

    @property
    def grid(self):
        return ContourGrid(self.points, self.derivatives, self.node_count)

    def refined(self):
        return trace_gamma(self.params, self.r, 2 * self.node_count, self.component, self.variant)

    def residuals(self):
        level = _level(self.params, self.r, self.variant)
        return np.abs(re_phi(self.points, self.params, self.variant) - level)

    def to_rows(self):
        return [(z.real, z.imag, res) for z, res in zip(self.points, self.residuals())]


def _level(p, r, variant):
    return float(re_phi(complex(r), p, variant))


def _z0(p, variant):
    c = p.c_tilde.real if variant == 'tilde' else p.c
    return 1.0 / (p.x * p.x * (1.0 + c))


def outer_real_points(p, r, variant='plain'):
    """
    Real crossings (r_minus, r_plus, r_plusplus): r_minus < 0 on the inner
    curve, z0 <= r_plus < x^-2 < r_plusplus on the outer one.
    """
    if p.x == 0:
        return -r, math.inf, math.inf
    z0 = _z0(p, variant)
    if not 0 < r <= z0 * (1 + 1e-14):
        raise ParameterRangeError('level curves need 0 < r <= z0', r=r, z0=z0)
    r = min(r, z0)
    level = _level(p, r, variant)
    u = p.outer_branch_point

    def f(t):
        return float(re_phi(complex(t), p, variant)) - level

    try:
        r_minus = -brentq(lambda t: f(-t), r * 1e-12, _grow(lambda t: f(-t), r))
        r_plus = z0 if r == z0 else brentq(f, z0, u * (1 - 1e-12))
        r_plusplus = brentq(f, u * (1 + 1e-12), _grow(f, 2 * u))
    except ValueError as exc:
        raise BracketError('real crossing not bracketed', r=r, x=p.x) from exc
    return r_minus, r_plus, r_plusplus


def _grow(f, start):
    t = start
    for _ in range(200):
        if f(t) > 0:
            return t
        t *= 2.0
    raise BracketError('no upper bracket for the real crossing', start=start)


def _ray_crossing(p, level, anchor, theta, rho_max, variant):
    direction = complex(math.cos(theta), math.sin(theta))

    def f(rho):
        return float(re_phi(anchor + rho * direction, p, variant)) - level

    grid = np.geomspace(rho_max * 1e-6, rho_max, SCAN_POINTS)
    values = re_phi(anchor + grid * direction, p, variant) - level
    crossing = np.nonzero((values[:-1] < 0) & (values[1:] >= 0))[0]
    if len(crossing) == 0:
        raise BracketError('no sign change along the ray', theta=theta, anchor=anchor)
    i = crossing[0]
    rho = brentq(f, grid[i], grid[i + 1], xtol=1e-15)
    # Newton polish
    z = anchor + rho * direction
    slope = (phi_prime(z, p, variant) * direction).real
    if slope != 0:
        rho -= f(rho) / slope
    return rho


def _trace_once(p, r, count, component, variant):
    level = _level(p, r, variant)
    r_minus, r_plus, r_plusplus = outer_real_points(p, r, variant)
    if component == 'inner':
        anchor = 0.0
        axis = (r, -r_minus)
        rho_max = 2.0 * p.outer_branch_point + 2.0
    else:
        anchor = 0.5 * (r_plus + r_plusplus)
        axis = (r_plusplus - anchor, anchor - r_plus)
        rho_max = 4.0 * r_plusplus

    half = count // 2
    thetas = 2.0 * np.pi * np.arange(half + 1) / count
    rhos = np.empty(half + 1)
    rhos[0], rhos[half] = axis
    for k in range(1, half):
        rhos[k] = _ray_crossing(p, level, anchor, thetas[k], rho_max, variant)

    direction = np.exp(1j * thetas)
    upper = anchor + rhos * direction
    gradient = phi_prime(upper, p, variant)
    f_rho = (gradient * direction).real
    f_theta = (gradient * 1j * rhos * direction).real
    drho = np.divide(-f_theta, f_rho, out=np.zeros_like(f_rho), where=f_rho != 0)
    drho[0] = drho[half] = 0.0
    dz_upper = (drho + 1j * rhos) * direction

    points = np.concatenate([upper, np.conj(upper[half - 1:0:-1])])
    derivatives = np.concatenate([dz_upper, -np.conj(dz_upper[half - 1:0:-1])])
    # axis points are exactly real
    points[0] = points[0].real
    points[half] = points[half].real
    return anchor, points, derivatives, level


def trace_gamma(p, r, npoints=None, component='inner', variant='plain'):
    """
    Trace one component of Re phi(z) = phi(r) as a closed counterclockwise curve.
    x = 0 gives the circle |z| = r exactly.
    """
    if component not in COMPONENTS:
        raise ParameterRangeError(f'unknown component {component!r}', choices=COMPONENTS)
    cfg = settings.GEOMETRY
    count = npoints or cfg['CURVE_POINTS']
    if count % 2:
        count += 1

    if p.x == 0:
        if component == 'outer':
            raise ParameterRangeError('there is no outer component when x = 0')
        grid = ContourGrid.circle(r, count)
        return LevelCurve(p, r, component, variant, 0.0, grid.points, grid.derivatives, 0.0)

    max_nodes = settings.section('QUADRATURE', 'MAX_NODES')
    previous_ratio = math.inf
    while True:
        anchor, points, derivatives, level = _trace_once(p, r, count, component, variant)
        spacing = np.abs(np.diff(np.append(points, points[0])))
        ratio = float(np.max(spacing) / np.median(spacing))
        # doubling only helps while the unevenness comes from under-resolved corners
        if ratio <= 2.0 or ratio > 0.9 * previous_ratio or 2 * count > max_nodes:
            break
        logger.debug('trace_gamma: spacing ratio %.2f at %d points, doubling', ratio, count)
        previous_ratio = ratio
        count *= 2

    residual = float(np.max(np.abs(re_phi(points, p, variant) - level)))
    if residual > cfg['RESIDUAL_TOLERANCE']:
        raise AccuracyError('level curve residual too large', r=r, residual=residual)
    logger.debug('trace_gamma %s r=%.6g points=%d residual=%.2e', component, r, count, residual)
    return LevelCurve(p, r, component, variant, anchor, points, derivatives, residual)


# ---------------------------------------------------------------------------
# Curve helpers
# ---------------------------------------------------------------------------

def _segments(curve):
    start = curve.points
    end = np.roll(curve.points, -1)
    return start, end


def winding_number(curve, z):
    start, end = _segments(curve)
    turns = np.angle((end - z) / (start - z))
    return int(round(math.fsum(turns) / (2.0 * math.pi)))


def distance_to_curve(curve, z):
    start, end = _segments(curve)
    edge = end - start
    t = np.clip(((z - start) * np.conj(edge)).real / np.abs(edge) ** 2, 0.0, 1.0)
    return float(np.min(np.abs(start + t * edge - z)))


def real_crossings(curve):
    """Number of sign changes of Im z around the closed curve."""
    signs = np.sign(curve.points.imag)
    signs = signs[signs != 0]
    return int(np.count_nonzero(signs != np.roll(signs, -1)))


def _orient(a, b, c):
    return np.sign(((b - a) * np.conj(c - a)).imag)


def is_simple(curve):
    """True when no two non-adjacent polyline segments intersect."""
    start, end = _segments(curve)
    count = len(start)
    i, j = np.triu_indices(count, k=2)
    keep = ~((i == 0) & (j == count - 1))
    i, j = i[keep], j[keep]
    a, b, c, d = start[i], end[i], start[j], end[j]
    crosses = ((_orient(a, b, c) * _orient(a, b, d) < 0)
               & (_orient(c, d, a) * _orient(c, d, b) < 0))
    return not bool(np.any(crosses))


# ---------------------------------------------------------------------------
# Saddle and regions
# ---------------------------------------------------------------------------

def saddle_report(p):
    if p.x == 0:
        raise ParameterRangeError('the saddle point needs x > 0')
    p.require_strong()
    z0, ell = saddle_and_ell(p, p.z0)
    slope = complex(phi_prime(complex(z0), p))
    if abs(slope) > 1e-12 * (1.0 + 1.0 / z0):
        raise AccuracyError('phi prime does not vanish at z0', z0=z0, phi_prime=slope)
    # z0 is real and below x^-2, so phi(z0) is real and equals ell(z0)
    value = complex(phi(complex(z0), p))
    if abs(value - ell) > 1e-12 * (1.0 + abs(ell)):
        raise AccuracyError('phi(z0) disagrees with ell(z0)', z0=z0, phi=value, ell=ell)
    return SaddleReport(
        z0=z0,
        phi=complex(ell).real,
        phi_second=complex(phi_second(complex(z0), p)).real,
        phi_prime=abs(slope),
    )


def classify(z, p, curve=None, u_width=None, delta=None):
    """
    Disc1 when |z - 1| < delta/n, else NbhdU when |Re phi(z) - phi(1)| < u_width,
    else IntGamma1 or ExtGamma1 by the winding number of Gamma_1.
    """
    cfg = settings.GEOMETRY
    u_width = cfg['U_WIDTH_FACTOR'] / p.n if u_width is None else u_width
    delta = cfg['DISC_DELTA'] if delta is None else delta
    curve = curve or trace_gamma(p, 1.0)
    z = complex(z)
    distance = distance_to_curve(curve, z)
    offset = abs(p.n * (z - 1.0))

    if abs(z - 1.0) < delta / p.n:
        region = Region.DISC
    elif abs(float(re_phi(z, p)) - _level(p, 1.0, 'plain')) < u_width:
        region = Region.NBHD_U
    elif winding_number(curve, z) != 0:
        region = Region.INT
    else:
        region = Region.EXT
    return RegionLabel(region, distance, offset)
