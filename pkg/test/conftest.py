"""Shared fixtures."""
import numpy as np
import pytest

from approxmax.config.settings import RuntimeSettings
from approxmax.core.fixed_point import FixedFormat
from approxmax.kernels.factory import KernelFactory


@pytest.fixture(autouse=True)
def _isolated_env(monkeypatch):
    for name in ("APPROXMAX_THREADS", "APPROXMAX_LOG_LEVEL", "APPROXMAX_MP_PREC"):
        monkeypatch.delenv(name, raising=False)


@pytest.fixture
def settings():
    return RuntimeSettings()


@pytest.fixture
def factory(settings):
    return KernelFactory(settings)


@pytest.fixture
def q16_15():
    return FixedFormat(16, 15)


@pytest.fixture
def q12_6():
    return FixedFormat(12, 6)


@pytest.fixture
def q8_7():
    return FixedFormat(8, 7)


@pytest.fixture
def rng():
    return np.random.Generator(np.random.PCG64(20240607))
