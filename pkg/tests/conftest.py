import pytest
from hypothesis import HealthCheck, settings

from eqk.perm import build_group

settings.register_profile(
    "eqk",
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("eqk")

SMALL = ("C1", "C2", "C3", "C4", "C6", "C2xC2", "S3", "D8", "Q8", "A4")


@pytest.fixture(scope="session")
def groups():
    return {name: build_group(name) for name in SMALL}
