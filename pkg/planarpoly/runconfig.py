"""
Run configuration: parsing and validation of command parameters.

``RunConfig`` is a frozen pydantic model. Field bounds live on the fields,
the model parameters are checked together once the fields are clean, and
``build_config`` turns a rejected mapping into ``ParameterRangeError``.
The result header records the same model, so the bounds have one home.
"""
import logging
import math
from pathlib import Path
from typing import Literal, Optional

import pydantic
import yaml
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .exceptions import ParameterRangeError, PlanarError, ValidationError
from .model import ModelParams

logger = logging.getLogger(__name__)

COMMANDS = ('poly', 'moments', 'curve', 'asy', 'rgamma', 'clt', 'diffid', 'painleve', 'verify')
FORMATS = ('json', 'csv')
SEED_LIMIT = 2 ** 64

Command = Literal[COMMANDS]
OutputFormat = Literal[FORMATS]


class RunConfig(BaseModel):
    """
    Validated parameters of one command run.

        config = RunConfig(command='rgamma', n=8, N=16, x=0.3)
        config.params()
    """
    model_config = ConfigDict(frozen=True, extra='forbid')

    command: Command
    n: int = Field(8, ge=1)
    N: float = 16
    gamma_re: float = 0.0
    gamma_im: float = 0.0
    x: float = Field(0.0, ge=0.0, lt=1.0)
    alpha: Optional[float] = Field(None, gt=0.0)
    nodes: Optional[int] = Field(None, ge=8)
    radius: Optional[float] = Field(None, gt=1.0)
    seed: int = Field(0, ge=0, lt=SEED_LIMIT)
    output_format: OutputFormat = 'json'
    output: Optional[str] = None
    options: dict = Field(default_factory=dict)

    @field_validator('N')
    @classmethod
    def integral_N_stays_integral(cls, value):
        return int(value) if math.isfinite(value) and value == int(value) else value

    @field_validator('output', mode='before')
    @classmethod
    def output_as_text(cls, value):
        return None if value is None else str(value)

    @model_validator(mode='after')
    def model_parameters_agree(self):
        if self.command == 'verify':
            return self
        try:
            self.params()
        except PlanarError as exc:
            raise ValueError(exc.message) from exc
        return self

    @property
    def gamma(self):
        return complex(self.gamma_re, self.gamma_im)

    def params(self):
        """ModelParams for this run; ``alpha`` wins over ``N`` when both are set."""
        gamma = self.gamma if self.gamma_im else self.gamma_re
        if self.alpha is not None:
            return ModelParams.from_alpha(self.n, self.alpha, gamma=gamma, x=self.x)
        return ModelParams(n=self.n, N=self.N, gamma=gamma, x=self.x)

    def as_dict(self):
        return self.model_dump()


def load_yaml(path):
    """Read a YAML mapping of RunConfig fields."""
    path = Path(path)
    try:
        data = yaml.safe_load(path.read_text())
    except (OSError, yaml.YAMLError) as exc:
        raise ValidationError(f'cannot read config file {path}', reason=str(exc)) from exc
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ValidationError('config file must hold a mapping', path=str(path))
    return data


def error_context(exc):
    """{field: message} from a pydantic ValidationError; model-level errors go under '__all__'."""
    context = {}
    for error in exc.errors():
        key = '.'.join(map(str, error['loc'])) or '__all__'
        context.setdefault(key, error['msg'])
    return context


def build_config(values, config_file=None):
    """Merge command-line ``values`` over ``config_file`` and validate the result."""
    data = load_yaml(config_file) if config_file else {}
    options = {**(data.get('options') or {}), **(values.get('options') or {})}
    data.update({key: value for key, value in values.items() if value is not None})
    data = {key: value for key, value in data.items() if value is not None}
    data['options'] = {key: value for key, value in options.items() if value is not None}
    try:
        return RunConfig.model_validate(data)
    except pydantic.ValidationError as exc:
        context = error_context(exc)
        logger.debug('run config rejected: %s', context)
        raise ParameterRangeError('invalid run configuration', **context) from exc
