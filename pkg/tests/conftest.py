import random

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "seplab",
    derandomize=True,
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("seplab")


@pytest.fixture
def rng():
    return random.Random(20240)
