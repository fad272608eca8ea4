"""
Command-line surface.

    python manage.py rgamma --exact --n 8 --N 16 --gamma 1 --x 0.3
    python manage.py curve --n 37 --N 74 --gamma 0.5 --x 0.583333 --r 1 --format csv
    python manage.py verify --quick

Library errors become a JSON record on stderr and exit code 2 (invalid
request) or 3 (tolerance not met).
"""
import functools
import json
import logging
import logging.config

import click
from rich.console import Console
from rich.logging import RichHandler

from . import __version__, asymptotics, commands, geometry, verify
from .conf import settings
from .exceptions import PlanarError
from .export import build_document, write_csv, write_json
from .runconfig import build_config

logger = logging.getLogger(__name__)

_MODEL_OPTIONS = (
    click.option('--n', 'n', type=int, help='Polynomial degree / matrix size n.'),
    click.option('--N', 'big_n', type=float, help='Unitary size N (alpha = N - n).'),
    click.option('--alpha', type=float, help='alpha directly; allows non-integer N.'),
    click.option('--gamma', 'gamma_re', type=float, help='Real part of gamma.'),
    click.option('--gamma-im', 'gamma_im', type=float, help='Imaginary part of gamma.'),
    click.option('--x', 'x', type=float, help='Charge position in [0, 1).'),
    click.option('--nodes', type=int, help='Node count override.'),
    click.option('--radius', type=float, help='Moment circle radius override.'),
    click.option('--seed', type=click.IntRange(0, 2 ** 64 - 1), help='Random seed.'),
    click.option('--format', 'output_format', type=click.Choice(['json', 'csv'])),
    click.option('--output', '-o', help="Output path; '-' for stdout."),
    click.option('--config', 'config_file', type=click.Path(exists=True, dir_okay=False),
                 help='YAML file with run configuration fields.'),
)


def stderr_handler(**kwargs):
    """RichHandler bound to stderr so stdout carries only the result document."""
    return RichHandler(console=Console(stderr=True), **kwargs)


def model_options(func):
    for decorator in reversed(_MODEL_OPTIONS):
        func = decorator(func)
    return func


def reports_errors(func):
    """Turn PlanarError into a machine-readable record and its exit code."""
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        ctx = click.get_current_context()
        try:
            return func(*args, **kwargs)
        except PlanarError as exc:
            logger.error('%s: %s', type(exc).__name__, exc.message)
            click.echo(json.dumps(exc.to_record(), sort_keys=True), err=True)
            ctx.exit(exc.exit_code)
    return wrapper


def _config(command, values, **options):
    config_file = values.pop('config_file', None)
    renamed = {'N' if key == 'big_n' else key: value for key, value in values.items()}
    config = build_config({'command': command, **renamed, 'options': options}, config_file)
    logger.info('%s: %s', command, config.params() if command != 'verify' else 'suite')
    return config


def _emit(config):
    output = commands.build(config)
    document = build_document(config.command, config, output.body)
    if config.output_format == 'csv':
        write_csv(document, output.columns, output.rows, config.output)
    else:
        write_json(document, config.output)
    return document


@click.group()
@click.version_option(__version__)
@click.option('--settings', 'settings_module',
              help='Settings module, e.g. config.settings.production; PLANAR_SETTINGS_MODULE otherwise.')
def cli(settings_module):
    """Planar orthogonal polynomials, Toeplitz determinants and R_gamma(x)."""
    if settings_module:
        settings.configure(settings_module)
    logging.config.dictConfig(settings.LOGGING)
    logging.captureWarnings(True)


@cli.command()
@model_options
@click.option('--degree', type=int, help='Degree of P (defaults to n).')
@reports_errors
def poly(degree, **values):
    """Monic P_n, its partner Q_n, norming constants and zeros."""
    _emit(_config('poly', values, degree=degree))


@cli.command()
@model_options
@click.option('--kmax', type=int, help='Largest moment index (defaults to n).')
@reports_errors
def moments(kmax, **values):
    """Contour moments m[-k..k] and the Toeplitz chain T_1..T_k."""
    _emit(_config('moments', values, kmax=kmax))


@cli.command()
@model_options
@click.option('--r', 'r', type=float, help='Level r of Gamma_r (default 1).')
@click.option('--component', type=click.Choice(geometry.COMPONENTS))
@click.option('--variant', type=click.Choice(['plain', 'tilde']))
@reports_errors
def curve(r, component, variant, **values):
    """Trace the level curve Re phi(z) = phi(r)."""
    _emit(_config('curve', values, r=r, component=component, variant=variant))


@cli.command()
@model_options
@click.option('--table', type=click.Choice(['polynomial', 'integral']),
              help='Compare P_n (polynomial) or the Gamma_t integral.')
@click.option('--regime', type=click.Choice(asymptotics.REGIMES))
@click.option('--scale', type=float, multiple=True, help='Ring scales about the origin.')
@click.option('--count', type=int, help='Points per ring.')
@click.option('--convention', type=click.Choice(asymptotics.DISC_CONVENTIONS))
@reports_errors
def asy(table, regime, scale, count, convention, **values):
    """Comparison tables of the large-n formulas against exact values."""
    _emit(_config('asy', values, table=table, regime=regime, scale=list(scale) or None,
                  count=count, convention=convention))


@cli.command()
@model_options
@click.option('--exact', 'method', flag_value='exact', help='Toeplitz determinant (default).')
@click.option('--asymptotic', 'method', flag_value='asymptotic', help='Strong-regime expansion.')
@click.option('--mc', 'method', flag_value='mc', help='Monte Carlo over truncations.')
@click.option('--samples', type=int, help='Monte Carlo samples.')
@click.option('--allow-heavy-tail', is_flag=True, help='Allow gamma <= -1 in Monte Carlo.')
@reports_errors
def rgamma(method, samples, allow_heavy_tail, **values):
    """log E|det(B_n - x)|^gamma."""
    _emit(_config('rgamma', values, method=method, samples=samples,
                  allow_heavy_tail=allow_heavy_tail or None))


@cli.command()
@model_options
@click.option('--samples', type=int, help='Number of sampled truncations.')
@click.option('--mgf', type=float, multiple=True, help='Also report log E exp(tY) at these t.')
@reports_errors
def clt(samples, mgf, **values):
    """Empirical distribution of the standardized log|det(B_n - x)|."""
    _emit(_config('clt', values, samples=samples, mgf=list(mgf) or None))


@cli.command()
@model_options
@click.option('--step', type=float, help='Finite-difference step in x.')
@reports_errors
def diffid(step, **values):
    """Differential identity for d log R_gamma / dx against a finite difference."""
    _emit(_config('diffid', values, step=step))


@cli.command('painleve')
@model_options
@click.option('--v', 'v', type=float, help='Scaling variable, x^2 = 1 - v/n.')
@click.option('--u-max', 'u_max', type=float, help='Start of the backward integration.')
@click.option('--no-compare', is_flag=True, help='Skip the exact finite-n comparison.')
@click.option('--omega', is_flag=True, help='Also compute Omega(+inf) and its closed form.')
@reports_errors
def painleve_command(v, u_max, no_compare, omega, **values):
    """sigma-Painleve V solution and the weak-regime double-scaling comparison."""
    _emit(_config('painleve', values, v=v, u_max=u_max,
                  compare=False if no_compare else None, omega=omega or None))


@cli.command('verify')
@click.option('--only', multiple=True, type=click.Choice(list(verify.CHECKS)), help='Run a single check.')
@click.option('--quick', is_flag=True, help='Reduced sample counts.')
@click.option('--seed', type=click.IntRange(0, 2 ** 64 - 1), default=0)
@click.option('--output', '-o', help="Output path; '-' for stdout.")
@reports_errors
def verify_command(only, quick, seed, output):
    """Run the acceptance suite and print a pass/fail table."""
    config = _config('verify', {'seed': seed, 'output': output},
                     only=list(only) or None, quick=quick or None)
    results = verify.run_suite(config.options.get('only'), config.options.get('quick', False), config.seed)
    Console(stderr=True).print(verify.results_table(results))
    body = verify.results_body(results)
    write_json(build_document('verify', config, body), config.output)
    if not body['passed']:
        click.get_current_context().exit(3)
