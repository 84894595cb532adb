import pytest

from padiclf.measure import build_measure
from padiclf.modsym import build_space, eigensymbol
from padiclf.numoracle import CurveData

# Weierstrass data of the fixtures
CURVE_11A1 = CurveData(0, -1, 1, -10, -20, conductor=11)
CURVE_37A1 = CurveData(0, 0, 1, -1, 0, conductor=37)
CURVE_37B1 = CurveData(0, 1, 1, -23, -50, conductor=37)

EV_11A1 = {2: -2, 3: -1, 5: 1, 7: -2, 13: 4}
EV_37A1 = {2: -2, 3: -3, 5: -2, 7: -1, 13: -2}
EV_37B1 = {2: 0, 3: 1, 5: 0, 7: -1, 13: -4}


@pytest.fixture(scope="session")
def space11():
    return build_space(11, 1)


@pytest.fixture(scope="session")
def space37():
    return build_space(37, 1)


@pytest.fixture(scope="session")
def space37_minus():
    return build_space(37, -1)


@pytest.fixture(scope="session")
def sym11(space11):
    return eigensymbol(space11, EV_11A1)


@pytest.fixture(scope="session")
def sym37a(space37):
    return eigensymbol(space37, EV_37A1)


@pytest.fixture(scope="session")
def sym37b(space37):
    return eigensymbol(space37, EV_37B1)


@pytest.fixture(scope="session")
def table11(sym11):
    return build_measure(sym11, 5, 6)


@pytest.fixture(scope="session")
def table37a(sym37a):
    return build_measure(sym37a, 5, 6)


@pytest.fixture(scope="session")
def table37b(sym37b):
    return build_measure(sym37b, 5, 6, root="plus")
