import numpy as np
import pytest
from hypothesis import HealthCheck, settings

# deterministic, matrix-friendly hypothesis profile
settings.register_profile(
    "repo",
    deadline=None,
    derandomize=True,
    max_examples=25,
    suppress_health_check=[
        HealthCheck.too_slow,
        HealthCheck.filter_too_much,
        HealthCheck.data_too_large,
    ],
)
settings.load_profile("repo")


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20260814)
