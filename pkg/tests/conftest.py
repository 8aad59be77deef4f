import numpy as np
import pytest

from testbench.core.config import settings
from testbench.domain.operators import BlockValues
from testbench.harmonic.gauges import AbsoluteGauge


@pytest.fixture
def rng():
    """Seeded generator so every test draws the same data."""
    return np.random.default_rng(20240601)


@pytest.fixture
def absolute_gauge():
    return AbsoluteGauge()


@pytest.fixture
def scalar_block(absolute_gauge):
    """Block of length 4 with increments 1, 2, -3 starting at frequency 4."""
    return BlockValues(entries=[0.0, 1.0, 3.0, 0.0], gauge=absolute_gauge, start=4)


@pytest.fixture
def single_thread(monkeypatch):
    """Pin the default worker count so results do not depend on the machine."""
    monkeypatch.setattr(settings, "THREADS", 1)
    return 1


@pytest.fixture
def output_dir(tmp_path, monkeypatch):
    """Artifact directory; metrics export and tracking stay off."""
    monkeypatch.setattr(settings, "METRICS_FILE", "")
    monkeypatch.setattr(settings, "MLFLOW_TRACKING_URI", "")
    target = tmp_path / "results"
    return target
