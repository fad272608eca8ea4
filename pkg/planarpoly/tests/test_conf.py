import pytest

from planarpoly.conf import ImproperlyConfigured, LazySettings, override_settings, settings


@pytest.fixture
def settings_module(tmp_path, monkeypatch):
    """Write a settings module that star-imports local and appends ``extra``."""
    monkeypatch.syspath_prepend(str(tmp_path))

    def write(name, extra):
        (tmp_path / f'{name}.py').write_text(f'from config.settings.local import *\n{extra}\n')
        return name
    return write


class TestLoading:
    def test_local_settings_load(self):
        lazy = LazySettings()
        lazy.configure('config.settings.local')
        assert lazy.PAINLEVE['U_MAX'] == 60.0
        assert lazy.section('OUTPUT', 'FLOAT_FORMAT') == '.17g'

    def test_production_settings_load(self):
        lazy = LazySettings()
        lazy.configure('config.settings.production')
        assert lazy.QUADRATURE['TOLERANCE'] <= 1e-12
        assert lazy.ENSEMBLE['THREADS'] >= 1

    def test_misspelt_key_fails_at_load(self, settings_module):
        name = settings_module('typo_key', "PAINLEVE = {**PAINLEVE, 'U_MAXX': 80.0}")
        with pytest.raises(ImproperlyConfigured) as info:
            LazySettings().configure(name)
        assert 'PAINLEVE.U_MAXX' in str(info.value)

    def test_misspelt_section_fails_at_load(self, settings_module):
        name = settings_module('typo_section', "PAINLEV = PAINLEVE")
        with pytest.raises(ImproperlyConfigured):
            LazySettings().configure(name)

    def test_missing_key_fails_at_load(self, settings_module):
        name = settings_module('missing_key', "SPECFUN = {k: v for k, v in SPECFUN.items() if k != 'BARNES_SHIFT'}")
        with pytest.raises(ImproperlyConfigured) as info:
            LazySettings().configure(name)
        assert 'SPECFUN.BARNES_SHIFT' in str(info.value)

    def test_bad_choice_fails_at_load(self, settings_module):
        name = settings_module('bad_choice', "ASYMPTOTICS = {**ASYMPTOTICS, 'DISC_CONVENTION': 'upper'}")
        with pytest.raises(ImproperlyConfigured):
            LazySettings().configure(name)

    def test_unknown_module(self):
        with pytest.raises(ImproperlyConfigured):
            LazySettings().configure('config.settings.absent')

    def test_undefined_setting(self):
        lazy = LazySettings()
        lazy.configure('config.settings.local')
        with pytest.raises(AttributeError):
            lazy.NOT_A_SETTING


class TestOverride:
    def test_sections_are_merged_and_restored(self):
        before = settings.PAINLEVE['U_MAX']
        with override_settings(PAINLEVE={'U_MAX': 80.0}):
            assert settings.PAINLEVE['U_MAX'] == 80.0
            assert settings.PAINLEVE['RTOL'] == 1e-12
        assert settings.PAINLEVE['U_MAX'] == before

    def test_overrides_are_validated(self):
        with pytest.raises(ImproperlyConfigured):
            with override_settings(ENSEMBLE={'THREADS': 0}):
                pass
        assert settings.ENSEMBLE['THREADS'] >= 1

    def test_misspelt_override(self):
        with pytest.raises(ImproperlyConfigured):
            with override_settings(QUADRATURE={'MAX_NODE': 64}):
                pass
