import numpy as np
import pytest

from torspec.cutoffs import default_families


@pytest.fixture(scope="session")
def families():
    return default_families()


@pytest.fixture(scope="session")
def fam(families):
    return families[0]


@pytest.fixture(scope="session")
def profiles(families):
    return [f.profile for f in families]


@pytest.fixture()
def rng():
    return np.random.default_rng(1234)
