import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "anglekit",
    max_examples=25,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("anglekit")


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def random_hermitian(dim, seed):
    gen = np.random.default_rng(seed)
    raw = gen.standard_normal((dim, dim)) + 1j * gen.standard_normal((dim, dim))
    return (raw + raw.conj().T) / 2.0
