import os

import hypothesis
import numpy as np
import pytest

os.environ.setdefault('PLANAR_SETTINGS_MODULE', 'config.settings.local')

np.seterr(all="warn")

hypothesis.settings.register_profile("ci", max_examples=25, deadline=None)
hypothesis.settings.register_profile("dev", max_examples=5, deadline=None)
hypothesis.settings.load_profile(os.getenv("HYPOTHESIS_PROFILE", "dev"))


@pytest.fixture
def strong():
    """n = 8, N = 16, gamma = 1, x = 0.3: strong regime, z0 > 1."""
    from planarpoly.model import ModelParams
    return ModelParams(n=8, N=16, gamma=1.0, x=0.3)


@pytest.fixture
def output_dir(tmp_path):
    from planarpoly.conf import override_settings
    with override_settings(OUTPUT_DIR=tmp_path):
        yield tmp_path
