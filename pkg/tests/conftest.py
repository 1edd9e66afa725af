import pytest

from octacube.roots import f4_group
from octacube.wavefunction import make_state


@pytest.fixture(scope="session")
def group():
    return f4_group()


@pytest.fixture(scope="session")
def ground(group):
    return make_state((3, 1, 1, 2), group)


@pytest.fixture(scope="session")
def first_excited(group):
    return make_state((4, 1, 1, 2), group)
