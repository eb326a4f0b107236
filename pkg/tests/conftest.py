import random

import pytest

from src.data_io import DataManager


@pytest.fixture(scope="session")
def data():
    return DataManager()


@pytest.fixture(scope="session")
def load(data):
    def _load(name):
        datum, _ = data.load_datum(name)
        return datum
    return _load


@pytest.fixture
def gaussian(load):
    return load("gaussian")


@pytest.fixture
def quaternion(load):
    return load("quaternion")


@pytest.fixture
def skew(load):
    return load("skew-conjugation")


@pytest.fixture
def z4(load):
    return load("z4-alpha2")


@pytest.fixture
def f2c2(load):
    return load("f2c2")


@pytest.fixture
def f3c2(load):
    return load("f3c2")


@pytest.fixture
def rng():
    return random.Random(20240611)
