import pytest
from hypothesis import HealthCheck, settings

from handover.geometry import Disk, Interval, Region

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture
def two_intervals():
    return [Region(0, Interval(0.0, 2.0)), Region(1, Interval(1.0, 3.0))]


@pytest.fixture
def unit_disks():
    return [Region(0, Disk((0.0, 0.0), 1.0)), Region(1, Disk((1.5, 0.0), 1.0))]
