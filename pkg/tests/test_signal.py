"""Tests for signal generation, observation and loss."""

import numpy as np
import pytest

from hybrid_shrinkage.exceptions import DimensionError, ParameterError
from hybrid_shrinkage.signal import (
    Observation,
    Signal,
    SignalFamily,
    SignalSpec,
    generate_signal,
    observe,
    squared_loss,
)


def test_zero_sparsity_gives_zero_signal():
    """No nonzeros at eta = 0."""
    signal = generate_signal(
        SignalSpec(n=10, eta=0.0, family=SignalFamily.gaussian(1.0))
    )
    assert np.all(signal.values == 0.0)
    assert signal.support.size == 0


def test_half_plus_minus_counts():
    """Half the nonzeros are +3, the other half -3."""
    signal = generate_signal(
        SignalSpec(n=1000, eta=0.2, family=SignalFamily.half_plus_minus(3.0), seed=4)
    )
    assert np.count_nonzero(signal.values == 3.0) == 100
    assert np.count_nonzero(signal.values == -3.0) == 100
    assert np.count_nonzero(signal.values == 0.0) == 800


def test_rademacher_energy():
    """Every Rademacher nonzero contributes 1 to the squared norm."""
    signal = generate_signal(
        SignalSpec(n=1000, eta=0.1, family=SignalFamily.rademacher(), seed=9)
    )
    assert np.sum(signal.values**2) == pytest.approx(100.0)
    assert set(np.unique(signal.values)) <= {-1.0, 0.0, 1.0}


def test_generation_is_deterministic():
    """The signal is a pure function of its settings and seed."""
    spec = SignalSpec(n=500, eta=0.3, family=SignalFamily.laplace(2.0), seed=21)
    first, second = generate_signal(spec), generate_signal(spec)
    assert np.array_equal(first.values, second.values)
    other = generate_signal(
        SignalSpec(n=500, eta=0.3, family=SignalFamily.laplace(2.0), seed=22)
    )
    assert not np.array_equal(first.values, other.values)


@pytest.mark.parametrize("eta, k", [(0.125, 3), (0.1, 2), (1.0, 20)])
def test_nonzero_count_rounds_half_up(eta, k):
    """k = round(eta * n) with ties rounded upwards."""
    spec = SignalSpec(n=20, eta=eta, family=SignalFamily.all_constant(1.0))
    assert spec.k == k
    assert np.count_nonzero(generate_signal(spec).values) == k


@pytest.mark.parametrize(
    "family",
    [
        SignalFamily.half_plus_minus(3.0),
        SignalFamily.all_constant(3.0),
        SignalFamily.gaussian(5.0),
        SignalFamily.laplace(2.0),
        SignalFamily.rademacher(),
        SignalFamily.uniform(-5.0, 5.0),
    ],
)
def test_fourth_moment_within_bound(family):
    """The empirical fourth moment respects the family's constant."""
    signal = generate_signal(SignalSpec(n=5000, eta=0.5, family=family, seed=1))
    assert signal.fourth_moment <= family.fourth_moment_bound()


@pytest.mark.parametrize(
    "label",
    ["half:3", "const:-2.5", "gauss:5", "laplace:2", "rademacher", "uniform:-1:1"],
)
def test_family_labels_parse(label):
    """Family labels parse back to the same family."""
    family = SignalFamily.parse(label)
    assert family.label == label
    assert SignalFamily.parse(family.label) == family


@pytest.mark.parametrize(
    "text", ["half", "gauss:0", "uniform:1:-1", "cauchy:1", "rademacher:2", "half:x"]
)
def test_invalid_family_labels(text):
    """Malformed or out of domain families are parameter errors."""
    with pytest.raises(ParameterError):
        SignalFamily.parse(text)


@pytest.mark.parametrize(
    "settings", [{"eta": 1.5}, {"eta": -0.1}, {"n": 0}, {"seed": -1}]
)
def test_invalid_spec(settings):
    """Out of range signal settings are rejected."""
    with pytest.raises(ParameterError):
        SignalSpec(**settings)


def test_observe_is_deterministic(half_signal):
    """The same seed gives a bit-identical observation."""
    first, second = observe(half_signal, 17), observe(half_signal, 17)
    assert np.array_equal(first.y, second.y)
    assert not np.array_equal(first.y, observe(half_signal, 18).y)
    assert first.n == half_signal.n


def test_noise_statistics():
    """Unit variance, zero mean noise at large n."""
    zero = Signal(np.zeros(100_000), eta=0.0)
    y = observe(zero, 2024).y
    assert abs(np.mean(y**2) - 1.0) < 0.05
    assert abs(np.mean(y)) < 0.02


def test_values_are_read_only(half_signal, half_observation):
    """Signals and observations cannot be modified in place."""
    with pytest.raises(ValueError):
        half_signal.values[0] = 1.0
    with pytest.raises(ValueError):
        half_observation.y[0] = 1.0


def test_empty_observation_rejected():
    """Observations must be nonempty vectors."""
    with pytest.raises(DimensionError):
        Observation(np.array([]))


def test_squared_loss():
    """Hand computed loss values and symmetry."""
    theta = np.array([1.0, 2.0])
    assert squared_loss(theta, np.zeros(2)) == pytest.approx(5.0)
    assert squared_loss(theta, theta) == 0.0
    y = np.array([0.5, -1.5, 2.0])
    assert squared_loss(np.zeros(3), y) == pytest.approx(np.sum(y**2))
    assert squared_loss(y, theta[[0, 1, 0]]) == squared_loss(theta[[0, 1, 0]], y)


def test_squared_loss_length_mismatch():
    """Vectors of different length cannot be compared."""
    with pytest.raises(DimensionError):
        squared_loss(np.zeros(3), np.zeros(4))


def test_from_values():
    """Wrapping a vector derives its sparsity level."""
    signal = Signal.from_values([0.0, 2.0, 0.0, -1.0])
    assert signal.eta == 0.5
    assert list(signal.support) == [1, 3]
    assert Signal.from_values(np.r_[np.ones(3), np.zeros(4)]).support.size == 3


@pytest.mark.parametrize(
    "values, eta",
    [([0.0, 2.0, 0.0, -1.0], 0.25), ([0.0, 0.0], 0.5), ([1.0, 1.0], 1.5)],
)
def test_sparsity_must_match_nonzeros(values, eta):
    """A sparsity level that disagrees with the nonzero count is rejected."""
    with pytest.raises(ParameterError):
        Signal(np.array(values), eta=eta)
