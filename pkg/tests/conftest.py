import factory.random
import pytest

from chowstab import settings
from chowstab.catalog import load_catalog


@pytest.fixture(autouse=True)
def reseed_factories():
    factory.random.reseed_random(settings.SEED)


@pytest.fixture
def catalog():
    return load_catalog()


@pytest.fixture
def diamond(catalog):
    return catalog["X2"].polytope
