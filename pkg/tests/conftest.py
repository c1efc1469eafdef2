import pytest

from fps import FiberParams, PumpConfig


@pytest.fixture
def fig1_fiber():
    return FiberParams(gamma=3.0, beta2=-20.0, length=0.1)


@pytest.fixture
def fig1b_fiber():
    return FiberParams(gamma=3.0, beta2=20.0, length=0.1)


@pytest.fixture
def pump_x03():
    return PumpConfig(p0x=0.3)


@pytest.fixture
def fig2_fiber():
    return FiberParams(gamma=3.0, beta2=15.0, length=0.2, delta_beta1=200.0)


@pytest.fixture
def fig2_pump():
    return PumpConfig(p0x=0.15, p0y=0.15)


@pytest.fixture
def fig4a_fiber():
    return FiberParams(gamma=3.0, beta2=5.0, length=0.15, delta_beta0=2000.0)


@pytest.fixture
def pump_x1():
    return PumpConfig(p0x=1.0)
