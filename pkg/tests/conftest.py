import pytest

from modular_flags.highestweight import build_weyl_module, simple_module
from modular_flags.rootsys import Weight, root_system


@pytest.fixture(scope="session")
def A1():
    return root_system("A1")


@pytest.fixture(scope="session")
def A2():
    return root_system("A2")


@pytest.fixture(scope="session")
def B2():
    return root_system("B2")


@pytest.fixture(scope="session")
def C4():
    return root_system("C4")


@pytest.fixture(scope="session")
def c4_omega4_simple(C4):
    "L(omega_4) of C4 in characteristic 2"
    return simple_module(C4, Weight.fundamental(4, 4), 2)


@pytest.fixture(scope="session")
def b2_omega_simple(B2):
    "L(omega_1) of B2 in characteristic 2, omega_1 dual to the long simple root"
    return simple_module(B2, Weight.fundamental(1, 2), 2)


@pytest.fixture(scope="session")
def b2_omega_weyl(B2):
    return build_weyl_module(B2, Weight.fundamental(1, 2))
