import pathlib

import pytest

from src.suppvar.corpus import named_classes
from src.suppvar.generators import group_algebra, sweedler

DATA_DIR = pathlib.Path(__file__).resolve().parents[3] / "data"
DEPTH = 12


@pytest.fixture(scope="session")
def z2():
    return group_algebra(2, [2])


@pytest.fixture(scope="session")
def klein():
    return group_algebra(2, [2, 2])


@pytest.fixture(scope="session")
def z3():
    return group_algebra(3, [3])


@pytest.fixture(scope="session")
def sw3():
    return sweedler(3)


@pytest.fixture(scope="session")
def klein_classes(klein):
    return named_classes(klein, DEPTH)


@pytest.fixture(scope="session")
def c3_fixture_path():
    return DATA_DIR / "c3_fixture.json"
