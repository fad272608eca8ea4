"""
Result bodies of the computing commands.

Each builder takes a validated ``RunConfig`` and returns the body, the CSV
columns and the CSV rows; the command line only parses options and writes
the document. Builders are registered by command name in ``BUILDERS``.
"""
import logging
import math
from dataclasses import dataclass

from . import asymptotics, ensemble, geometry, orthopoly, painleve
from .exceptions import ParameterRangeError

logger = logging.getLogger(__name__)

BUILDERS = {}


@dataclass(frozen=True)
class CommandOutput:
    body: dict
    columns: list
    rows: list


def builder(name):
    def register(func):
        BUILDERS[name] = func
        return func
    return register


def build(config):
    """CommandOutput of ``config.command``."""
    try:
        func = BUILDERS[config.command]
    except KeyError:
        raise ParameterRangeError(f'no result body for {config.command!r}', command=config.command) from None
    logger.debug('building %s body', config.command)
    return func(config)


def _pairs(values):
    return [[complex(v).real, complex(v).imag] for v in values]


@builder('poly')
def build_poly(config):
    p = config.params()
    degree = config.options.get('degree', p.n)
    mt = orthopoly.moments(p, degree + 1, radius=config.radius)
    pair = orthopoly.monic_pair(p, degree, mt)
    zeros = orthopoly.poly_zeros(pair) if degree else []
    body = {
        'degree': degree,
        'P': _pairs(pair.P),
        'Q': _pairs(pair.Q),
        'chi': pair.chi,
        'chi_hat': pair.chi_hat,
        'zeros': _pairs(zeros),
        'orthogonality_residual': orthopoly.orthogonality_residual(pair, mt, p),
        'biorthogonality': orthopoly.biorthogonality(pair, mt, p),
    }
    rows = [(k, P.real, P.imag, Q.real, Q.imag) for k, (P, Q) in enumerate(zip(pair.P, pair.Q))]
    return CommandOutput(body, ['k', 'P_re', 'P_im', 'Q_re', 'Q_im'], rows)


@builder('moments')
def build_moments(config):
    p = config.params()
    kmax = config.options.get('kmax', p.n)
    mt = orthopoly.moments(p, kmax, radius=config.radius)
    chain = orthopoly.toeplitz_chain(mt, kmax + 1)
    indices = list(range(-kmax, kmax + 1))
    body = {
        'radius': mt.radius,
        'negative_radius': mt.negative_radius,
        'indices': indices,
        'moments': _pairs(mt.values),
        'errors': mt.errors,
        'log_abs_t': chain.log_abs,
        'phase_t': chain.phase,
    }
    rows = [(j, m.real, m.imag, err) for j, m, err in zip(indices, mt.values, mt.errors)]
    return CommandOutput(body, ['j', 'm_re', 'm_im', 'error'], rows)


@builder('curve')
def build_curve(config):
    p = config.params()
    options = config.options
    traced = geometry.trace_gamma(p, options.get('r', 1.0), config.nodes,
                                  options.get('component', 'inner'), options.get('variant', 'plain'))
    body = {
        'r': traced.r,
        'component': traced.component,
        'variant': traced.variant,
        'anchor': traced.anchor,
        'residual': traced.residual,
        'real_crossings': geometry.real_crossings(traced),
        'points': _pairs(traced.points),
    }
    return CommandOutput(body, ['re', 'im', 'residual'], traced.to_rows())


@builder('asy')
def build_asy(config):
    p = config.params()
    p.require_strong()
    options = config.options
    count = options.get('count', 32)
    if options.get('table', 'polynomial') == 'polynomial':
        traced = geometry.trace_gamma(p, 1.0)
        points = [z for s in options.get('scale', [0.5, 1.0, 1.5])
                  for z in asymptotics.ring(traced, s, count)]
        rows = asymptotics.region_table(p, points, traced, convention=options.get('convention'))
    else:
        t = asymptotics.contour_level(p)
        traced = geometry.trace_gamma(p, t)
        regime = options.get('regime', 'exterior')
        scales = options.get('scale', [0.5 if regime == 'interior' else 1.5])
        points = [z for s in scales for z in asymptotics.ring(traced, s, count)]
        rows = asymptotics.integral_table(p, points, regime, t, options.get('convention'))
    columns = ['z_re', 'z_im', 'region', 'exact_log', 'asy_log', 'rel_err']
    body = {'rows': rows, 'max_rel_err': max(row['rel_err'] for row in rows)}
    return CommandOutput(body, columns, [[row[c] for c in columns] for row in rows])


@builder('rgamma')
def build_rgamma(config):
    p = config.params()
    method = config.options.get('method', 'exact')
    body = {'method': method}
    if method == 'mc':
        estimate = ensemble.mc_rgamma(p, config.options.get('samples', 10_000), config.seed,
                                      config.options.get('allow_heavy_tail', False))
        body.update(log_value=estimate.log_mean, value=estimate.mean,
                    standard_error=estimate.standard_error, samples=estimate.samples)
    elif method == 'asymptotic':
        body['log_value'] = asymptotics.rgamma_asymptotic(p)
    elif p.gamma == 0:
        # R_0 = 1 identically; the Toeplitz value is reported alongside
        body.update(log_value=0.0, toeplitz_log_value=orthopoly.rgamma_exact(p))
    else:
        body['log_value'] = orthopoly.rgamma_exact(p)
    body['log_r_zero'] = orthopoly.rgamma_zero(p)
    rows = [(key, value) for key, value in body.items() if isinstance(value, (int, float))]
    return CommandOutput(body, ['quantity', 'value'], rows)


@builder('clt')
def build_clt(config):
    p = config.params()
    logdets = ensemble.draw(p, config.options.get('samples', 10_000), config.seed)
    summary = ensemble.clt_summary(logdets, p, config.seed)
    body = {
        'summary': summary,
        'kappa1': asymptotics.kappa1(p),
        'mgf': [
            {'t': t, 'exact': asymptotics.clt_log_mgf(t, p), 'limit': t * t / 2.0}
            for t in config.options.get('mgf', [])
        ],
    }
    standardized = asymptotics.clt_standardize(logdets, p)
    rows = [(index, value, z) for index, (value, z) in enumerate(zip(logdets, standardized))]
    return CommandOutput(body, ['index', 'logdet', 'standardized'], rows)


@builder('diffid')
def build_diffid(config):
    p = config.params()
    report = orthopoly.diffid_rhs(p)
    slope = orthopoly.finite_difference_slope(p, config.options.get('step', 1e-4))
    body = {
        'report': report.as_dict(),
        'finite_difference': slope,
        'relative_error': abs(report.value - slope) / abs(slope) if slope else math.inf,
        'asymptotic_slope': asymptotics.dlogr_asymptotic(p),
    }
    rows = [(key, complex(value).real, complex(value).imag)
            for key, value in report.as_dict().items() if not isinstance(value, str)]
    rows.append(('finite_difference', slope, 0.0))
    return CommandOutput(body, ['quantity', 're', 'im'], rows)


@builder('painleve')
def build_painleve(config):
    options = config.options
    if config.gamma_im:
        raise ParameterRangeError('the sigma-PV comparison needs a real gamma', gamma_im=config.gamma_im)
    alpha = config.alpha if config.alpha is not None else config.N - config.n
    pv = painleve.PVParams(alpha, config.gamma_re)
    v = options.get('v', 2.0)
    solution = painleve.sigma_solve(pv, v, options.get('u_max'))
    body = {
        'a': pv.a,
        'b': pv.b,
        'small_u_limit': pv.small_u_limit,
        'small_u_check': solution.small_u_check,
        'residual': solution.residual,
        'omega_integral': painleve.omega_integral(solution, v),
        'rgamma_pv': painleve.rgamma_pv(alpha, config.gamma_re, v, config.n, options.get('u_max')),
    }
    if options.get('compare', True):
        body['comparison'] = painleve.compare_weak(alpha, config.gamma_re, v, config.n, options.get('u_max'))
    if options.get('omega'):
        body['omega_infinity'] = painleve.omega_infinity(pv, u_max=options.get('u_max'))
        body['omega_infinity_closed'] = painleve.omega_infinity_closed(pv)
    return CommandOutput(body, ['u', 'sigma', 'sigma_prime', 'residual'], painleve.solution_rows(solution))
