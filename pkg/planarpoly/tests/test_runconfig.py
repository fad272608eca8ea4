import numpy as np
import pydantic
import pytest

from planarpoly.exceptions import (AccuracyError, DomainError, ParameterRangeError, PlanarError,
                                   StrongRegimeError, ValidationError)
from planarpoly.model import ModelParams
from planarpoly.runconfig import RunConfig, build_config, error_context, load_yaml
from planarpoly.schema import Header


class TestRunConfig:
    def test_valid_config(self):
        config = RunConfig.model_validate({'command': 'rgamma', 'n': 8, 'N': 16.0, 'x': '0.3', 'gamma_re': 1})
        assert config.N == 16 and isinstance(config.N, int)
        assert config.params() == ModelParams(n=8, N=16, gamma=1.0, x=0.3)

    def test_fractional_N_is_kept(self):
        assert RunConfig(command='rgamma', n=8, N=16.5).N == 16.5

    def test_defaults(self):
        config = RunConfig(command='poly')
        assert (config.seed, config.output_format, config.options) == (0, 'json', {})

    def test_frozen(self):
        config = RunConfig(command='poly')
        with pytest.raises(pydantic.ValidationError):
            config.seed = 3

    @pytest.mark.parametrize('field, value', [
        ('x', 1.0),
        ('x', -0.1),
        ('n', 2.5),
        ('n', 0),
        ('alpha', 0.0),
        ('nodes', 4),
        ('radius', 0.9),
        ('seed', -1),
        ('seed', 2 ** 64),
        ('output_format', 'xml'),
        ('options', [1, 2]),
        ('command', 'plot'),
    ])
    def test_field_errors(self, field, value):
        with pytest.raises(pydantic.ValidationError) as info:
            RunConfig.model_validate({'command': 'rgamma', field: value})
        assert field in error_context(info.value)

    def test_unknown_fields(self):
        with pytest.raises(pydantic.ValidationError) as info:
            RunConfig.model_validate({'command': 'rgamma', 'sigma': 1})
        assert 'sigma' in error_context(info.value)

    def test_command_is_required(self):
        with pytest.raises(pydantic.ValidationError) as info:
            RunConfig.model_validate({'n': 4})
        assert list(error_context(info.value)) == ['command']

    def test_cross_field_check(self):
        with pytest.raises(pydantic.ValidationError) as info:
            RunConfig.model_validate({'command': 'rgamma', 'n': 8, 'N': 8})
        assert 'N must exceed n' in error_context(info.value)['__all__']

    def test_verify_skips_model_check(self):
        assert RunConfig(command='verify', n=8, N=4).N == 4

    def test_alpha_wins_over_n_and_big_n(self):
        config = RunConfig(command='rgamma', n=4, N=100, alpha=2.5, x=0.2)
        assert config.params().alpha == 2.5

    def test_complex_gamma(self):
        config = RunConfig(command='rgamma', gamma_re=1.0, gamma_im=0.5)
        assert config.params().gamma == 1.0 + 0.5j

    def test_header_applies_the_same_bounds(self):
        header = {'schema_version': '1.0', 'command': 'rgamma', 'seed': 0, 'content_hash': '0' * 64,
                  'created_at': 'now', 'config': {'command': 'rgamma', 'x': 1.5}}
        with pytest.raises(pydantic.ValidationError) as info:
            Header.model_validate(header)
        assert 'config.x' in error_context(info.value)


class TestBuildConfig:
    def test_command_line_overrides_file(self, tmp_path):
        path = tmp_path / 'run.yaml'
        path.write_text('n: 6\nN: 12\nx: 0.2\noptions:\n  samples: 50\n')
        config = build_config({'command': 'rgamma', 'x': 0.4, 'n': None, 'options': {'method': 'mc'}}, path)
        assert (config.n, config.N, config.x) == (6, 12, 0.4)
        assert config.options == {'samples': 50, 'method': 'mc'}

    def test_none_values_are_ignored(self, tmp_path):
        path = tmp_path / 'run.yaml'
        path.write_text('seed: null\n')
        assert build_config({'command': 'poly'}, path).seed == 0

    def test_unset_options_are_dropped(self):
        config = build_config({'command': 'curve', 'options': {'r': None, 'component': 'outer'}})
        assert config.options == {'component': 'outer'}

    def test_invalid_values_raise_with_field_context(self):
        with pytest.raises(ParameterRangeError) as info:
            build_config({'command': 'rgamma', 'x': 1.5})
        assert 'x' in info.value.context
        assert info.value.exit_code == 2

    def test_cross_field_errors_are_parameter_errors(self):
        with pytest.raises(ParameterRangeError) as info:
            build_config({'command': 'rgamma', 'n': 8, 'N': 4})
        assert '__all__' in info.value.context

    def test_yaml_must_hold_a_mapping(self, tmp_path):
        path = tmp_path / 'list.yaml'
        path.write_text('- 1\n- 2\n')
        with pytest.raises(ValidationError):
            load_yaml(path)

    def test_empty_yaml(self, tmp_path):
        path = tmp_path / 'empty.yaml'
        path.write_text('')
        assert load_yaml(path) == {}

    def test_missing_file(self, tmp_path):
        with pytest.raises(ValidationError):
            load_yaml(tmp_path / 'absent.yaml')


class TestErrorRecords:
    def test_record(self):
        record = ParameterRangeError('bad charge', x=1.5, z=1 + 2j, n=np.int64(3), what=object).to_record()
        assert record['error'] == 'ParameterRangeError'
        assert record['message'] == 'bad charge'
        assert record['exit_code'] == 2
        assert record['context']['x'] == 1.5
        assert record['context']['z'] == [1.0, 2.0]
        assert record['context']['n'] == 3.0
        assert isinstance(record['context']['what'], str)

    @pytest.mark.parametrize('error, code', [(DomainError, 2), (ValidationError, 2), (StrongRegimeError, 2),
                                             (AccuracyError, 3), (PlanarError, 1)])
    def test_exit_codes(self, error, code):
        assert error('message').exit_code == code
