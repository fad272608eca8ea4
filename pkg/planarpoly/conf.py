"""
Settings access.

Settings live in ordinary modules under ``config/settings``; the module is
picked with ``PLANAR_SETTINGS_MODULE`` and imported on first access. The
module's upper-case names are checked once against ``ProjectSettings``, so a
misspelt section or key fails at load instead of at first use.
"""
import copy
import importlib
import os
from contextlib import contextmanager
from pathlib import Path
from typing import Literal

import pydantic
from pydantic import BaseModel, ConfigDict, Field

ENVIRONMENT_VARIABLE = 'PLANAR_SETTINGS_MODULE'
DEFAULT_SETTINGS_MODULE = 'config.settings.local'


class ImproperlyConfigured(Exception):
    pass


class Section(BaseModel):
    model_config = ConfigDict(extra='forbid')


class QuadratureSettings(Section):
    ANGULAR_NODES: int = Field(ge=8)
    RADIAL_NODES: int = Field(ge=2)
    MAX_NODES: int = Field(ge=8)
    TOLERANCE: float = Field(gt=0.0)
    NEGATIVE_MOMENT_RADIUS_CAP: float = Field(gt=1.0)


class SpecfunSettings(Section):
    GAMMA_CROSSOVER: float = Field(gt=0.0)
    GAMMA_MAX_ITERATIONS: int = Field(ge=1)
    GAMMA_ACCURACY: float = Field(gt=0.0)
    BARNES_SHIFT: float = Field(ge=0.0)


class OrthopolySettings(Section):
    DEGREE_CAP: int = Field(ge=1)
    CONDITIONING_WARNING: int = Field(ge=1)
    RESIDUAL_TOLERANCE: float
    DIFFID_PREFACTOR: Literal['main', 'appendix']


class GeometrySettings(Section):
    CURVE_POINTS: int = Field(ge=8)
    CUT_TOLERANCE: float = Field(ge=0.0)
    U_WIDTH_FACTOR: float = Field(gt=0.0)
    DISC_DELTA: float = Field(gt=0.0)
    RESIDUAL_TOLERANCE: float
    ZERO_DISTANCE_LIMIT: float = Field(gt=0.0)


class AsymptoticsSettings(Section):
    DISC_CONVENTION: Literal['uniform', 'printed']
    CONTOUR_T: float = Field(gt=1.0)


class PainleveSettings(Section):
    U_MAX: float = Field(ge=40.0)
    POLE_THRESHOLD: float = Field(gt=0.0)
    POLE_WINDOW: float = Field(gt=0.0)
    RTOL: float = Field(gt=0.0)
    ATOL: float = Field(gt=0.0)
    RESIDUAL_TOLERANCE: float
    U_MIN: float = Field(gt=0.0)


class EnsembleSettings(Section):
    THREADS: int = Field(ge=1)
    CHUNK_SIZE: int = Field(ge=1)
    UNITARITY_TOLERANCE: float = Field(gt=0.0)


class OutputSettings(Section):
    FLOAT_FORMAT: str


class ProjectSettings(Section):
    BASE_DIR: Path
    DEBUG: bool
    OUTPUT_DIR: Path
    QUADRATURE: QuadratureSettings
    SPECFUN: SpecfunSettings
    ORTHOPOLY: OrthopolySettings
    GEOMETRY: GeometrySettings
    ASYMPTOTICS: AsymptoticsSettings
    PAINLEVE: PainleveSettings
    ENSEMBLE: EnsembleSettings
    OUTPUT: OutputSettings
    LOGGING: dict


def validate_settings(values, source):
    """Check ``values`` against ProjectSettings; sections come back as plain dicts."""
    try:
        return ProjectSettings.model_validate(values).model_dump()
    except pydantic.ValidationError as exc:
        problems = '; '.join(f"{'.'.join(map(str, error['loc']))}: {error['msg']}" for error in exc.errors())
        raise ImproperlyConfigured(f'Invalid settings in {source}: {problems}') from exc


class LazySettings:
    def __init__(self):
        self._wrapped = None
        self._module_name = None

    def _setup(self, module_name=None, **overrides):
        module_name = module_name or os.environ.get(ENVIRONMENT_VARIABLE, DEFAULT_SETTINGS_MODULE)
        try:
            module = importlib.import_module(module_name)
        except ImportError as exc:
            raise ImproperlyConfigured(
                f"Settings module '{module_name}' could not be imported. "
                f"Check the {ENVIRONMENT_VARIABLE} environment variable."
            ) from exc
        values = {
            name: copy.deepcopy(getattr(module, name))
            for name in dir(module) if name.isupper()
        }
        values.update(overrides)
        self._wrapped = validate_settings(values, module_name)
        self._module_name = module_name

    def __getattr__(self, name):
        if name.startswith('_'):
            raise AttributeError(name)
        if self._wrapped is None:
            self._setup()
        try:
            return self._wrapped[name]
        except KeyError:
            raise AttributeError(f"Setting '{name}' is not defined in {self._module_name}") from None

    @property
    def configured(self):
        return self._wrapped is not None

    def configure(self, module_name=None, **overrides):
        """Load a specific settings module and apply overrides on top of it."""
        self._setup(module_name, **overrides)

    def section(self, name, key):
        """Shortcut for ``settings.NAME['KEY']``."""
        return getattr(self, name)[key]


settings = LazySettings()


@contextmanager
def override_settings(**sections):
    """
    Temporarily replace settings; dict-valued sections are merged.

        with override_settings(PAINLEVE={'U_MAX': 80.0}):
            ...
    """
    if settings._wrapped is None:
        settings._setup()
    saved = settings._wrapped
    merged = dict(saved)
    for name, value in sections.items():
        current = saved.get(name)
        if isinstance(current, dict) and isinstance(value, dict):
            merged[name] = {**current, **value}
        else:
            merged[name] = value
    settings._wrapped = validate_settings(merged, 'override_settings')
    try:
        yield settings
    finally:
        settings._wrapped = saved
