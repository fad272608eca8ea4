import pytest
from rich.table import Table

from planarpoly import commands, verify
from planarpoly.export import content_hash, plain
from planarpoly.runconfig import RunConfig


def _config(run, seed=0):
    return RunConfig.model_validate({'n': 8, 'N': 16, 'gamma_re': 1.0, 'x': 0.3, **run, 'seed': seed})


def test_registry_order():
    assert list(verify.CHECKS)[:3] == ['contour_equivalence', 'gamma_zero', 'x_zero']
    assert 'determinism' in verify.CHECKS


def test_unknown_check():
    with pytest.raises(KeyError):
        verify.run_suite(['no_such_check'])


def test_quick_checks_pass():
    results = verify.run_suite(['gamma_zero', 'determinism'], quick=True, seed=3)
    assert [r.name for r in results] == ['gamma_zero', 'determinism']
    assert all(r.passed for r in results), [r.detail for r in results]
    assert all(r.seconds >= 0 for r in results)


@pytest.mark.parametrize('name', ['contour_equivalence', 'x_zero', 'rgamma_convergence', 'differential_identity'])
def test_fast_checks_pass(name):
    result, = verify.run_suite([name], quick=True, seed=0)
    assert result.passed, result.detail
    assert result.measured <= result.threshold


@pytest.mark.slow
@pytest.mark.parametrize('name', ['polynomial_regions', 'integral_regimes', 'level_curves', 'painleve',
                                  'monte_carlo', 'clt'])
def test_slow_checks_pass(name):
    result, = verify.run_suite([name], quick=True, seed=0)
    assert result.passed, result.detail


class TestDeterminism:
    def test_covers_every_command(self):
        assert {run['command'] for run in verify.DETERMINISM_RUNS} == set(commands.BUILDERS)

    @pytest.mark.parametrize('run', verify.DETERMINISM_RUNS, ids=lambda run: run['command'])
    def test_body_hash_repeats(self, run):
        first = content_hash(plain(commands.build(_config(run, seed=11)).body))
        second = content_hash(plain(commands.build(_config(run, seed=11)).body))
        assert first == second

    def test_seed_reaches_the_sampler(self):
        run = {'command': 'rgamma', 'options': {'method': 'mc', 'samples': 200}}
        hashes = {content_hash(plain(commands.build(_config(run, seed)).body)) for seed in (1, 2)}
        assert len(hashes) == 2

    def test_check_reports_every_command(self):
        result = verify.check_determinism(True, 5)
        assert result.passed
        assert result.detail == f'{len(verify.DETERMINISM_RUNS) + 1} commands'


def test_body_leaves_out_timings():
    results = [verify.CheckResult('a', True, 0.1, 1.0, seconds=2.0),
               verify.CheckResult('b', False, 3.0, 1.0)]
    body = verify.results_body(results)
    assert body['passed'] is False
    assert 'seconds' not in body['checks'][0]
    assert isinstance(verify.results_table(results), Table)
