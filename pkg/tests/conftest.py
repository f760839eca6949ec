import pytest

from qfcsim.cli import default_config_path
from qfcsim.conversion import conversion_trace
from qfcsim.params import derive_params, load_config
from qfcsim.srs import propagate_fields


@pytest.fixture(scope="session")
def default_cfg():
    return load_config(default_config_path())


@pytest.fixture(scope="session")
def default_params(default_cfg):
    return derive_params(default_cfg)


@pytest.fixture(scope="session")
def default_profile(default_cfg, default_params):
    return propagate_fields(default_params, default_cfg, n_steps=4000)


@pytest.fixture(scope="session")
def default_trace(default_profile, default_params):
    return conversion_trace(default_profile, default_params)
