"""Shared fixtures for the test suite."""

import pytest

from hybrid_shrinkage.amp import generate_measurement
from hybrid_shrinkage.signal import SignalFamily, SignalSpec, generate_signal, observe


@pytest.fixture
def half_signal():
    """A signal of length 200 with 20 entries at +3 and 20 at -3."""
    spec = SignalSpec(
        n=200, eta=0.2, family=SignalFamily.half_plus_minus(3.0), seed=11
    )
    return generate_signal(spec)


@pytest.fixture
def half_observation(half_signal):
    """A noisy observation of ``half_signal``."""
    return observe(half_signal, seed=5)


@pytest.fixture
def small_model():
    """A noiseless compressed sensing problem with n = 400 and m = 200."""
    spec = SignalSpec(n=400, eta=0.1, family=SignalFamily.rademacher(), seed=3)
    return generate_measurement(400, 0.5, 0.0, generate_signal(spec), seed=3)


@pytest.fixture
def vector_file(tmp_path):
    """Write a vector file and return its path."""

    def _write(text: str, name: str = "y.txt"):
        path = tmp_path / name
        path.write_text(text)
        return path

    return _write
