import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from channelfield.geometry import Rect
from channelfield.pointfield import Configuration, IntensityParams, MarkedPoint, sample_configuration
from channelfield.tessellation import TessellationView

settings.register_profile("default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture(scope="session")
def params():
    return IntensityParams(1.5)


@pytest.fixture(scope="session")
def sampled_view(params):
    cfg = sample_configuration(Rect(0.0, 20.0, 0.0, 20.0), 1e-6, params, seed=11)
    return TessellationView(cfg)


def make_config(points, window=Rect(-1.0, 10.0, -4.0, 8.0)):
    return Configuration.from_points([MarkedPoint(*p) for p in points], window, alpha=1.5)
