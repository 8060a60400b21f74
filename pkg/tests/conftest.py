import pytest
from loguru import logger

from meanfix.examples import baseline_maps, disc_f_map, example1_map, example2_map
from meanfix.mappings import MultiIndex, PairSampler


@pytest.fixture
def ex1():
    return example1_map(16)


@pytest.fixture
def ex2():
    return example2_map(16)


@pytest.fixture
def disc_f():
    return disc_f_map()


@pytest.fixture
def identity():
    return baseline_maps("identity", 8, 1.0)


@pytest.fixture
def affine():
    return baseline_maps("affine-contraction", 8, 1.0)


@pytest.fixture
def half():
    return MultiIndex((0.5, 0.5), 1.0)


@pytest.fixture
def sampler_for():
    def make(T, seed=0):
        return PairSampler(T.domain, seed)

    return make


@pytest.fixture(autouse=True)
def quiet_run_logger():
    yield
    # the CLI binds loguru sinks to streams that CliRunner closes afterwards
    logger.remove()


@pytest.fixture
def trials():
    # keeps the suite fast while still hitting the sparse worst pairs
    return 20000


@pytest.fixture
def full_trials():
    return 100000
