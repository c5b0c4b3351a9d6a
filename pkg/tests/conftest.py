import json
import logging
import os

import django
import pytest
from django.conf import settings

# Configure Django settings for tests
if not settings.configured:
    os.environ.setdefault("DJANGO_SETTINGS_MODULE", "src.settings")
    django.setup()


@pytest.fixture(autouse=True)
def propagate_app_logs():
    """App loggers do not propagate in settings; caplog listens on the root"""
    loggers = [logging.getLogger(name) for name in settings.LOGGING["loggers"]]
    previous = [logger.propagate for logger in loggers]
    for logger in loggers:
        logger.propagate = True
    yield
    for logger, flag in zip(loggers, previous):
        logger.propagate = flag


@pytest.fixture
def model():
    """4^3 torus with the antiperiodic spin structure in every direction"""
    from tests.factories import TorusModelFactory

    return TorusModelFactory()


@pytest.fixture
def model_x():
    """4^3 torus antiperiodic along x only; lowest |xi| = pi"""
    from tests.factories import TorusModelFactory

    return TorusModelFactory(twist=(0.5, 0.0, 0.0))


@pytest.fixture
def gamma3():
    from clifford.gamma import build_gamma

    return build_gamma(3)


@pytest.fixture
def dirac(model, gamma3):
    from dirac.operator import DiracOperator

    return DiracOperator(model, gamma3)


@pytest.fixture
def dirac_x(model_x, gamma3):
    from dirac.operator import DiracOperator

    return DiracOperator(model_x, gamma3)


@pytest.fixture
def superlinear_energy(dirac_x):
    """p = 2, H = |psi|^4 / 4 on the x-twisted torus"""
    from energy.functional import Energy
    from tests.factories import NonlinearityFactory

    return Energy(dirac_x, 2.0, NonlinearityFactory())


@pytest.fixture
def sublinear_energy(dirac_x):
    """p = 2, H = |psi|^1.5 / 1.5 on the x-twisted torus"""
    from energy.functional import Energy
    from tests.factories import NonlinearityFactory

    return Energy(dirac_x, 2.0, NonlinearityFactory(e=1.5))


@pytest.fixture
def field_factory(model, gamma3):
    """Seeded random fields on the default model"""
    from lattice.fields import random_field

    def make(seed=0, target=None):
        return random_field(target or model, gamma3, seed)

    return make


@pytest.fixture
def output_dir(tmp_path):
    return tmp_path / "output"


@pytest.fixture
def write_config(tmp_path):
    """Write a run config dict to a JSON file and return its path"""

    def write(document, name="config.json"):
        path = tmp_path / name
        path.write_text(json.dumps(document))
        return path

    return write


@pytest.fixture
def small_config():
    """Run config on a 4^3 grid with light solver settings"""
    return {
        "model": {"m": 3, "grid": [4, 4, 4], "twist": [0.5, 0.5, 0.5]},
        "p": 2.0,
        "eigen": {"restarts": 2, "max_iter": 500},
        "solve": {"restarts": 1, "max_iter": 2000, "galerkin_k": 12},
    }
