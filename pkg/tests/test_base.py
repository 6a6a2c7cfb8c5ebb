"""Test the base python package (i.e. has it been installed correctly)."""

import numpy as np
import pytest

import hybrid_shrinkage
from hybrid_shrinkage import utils


def test_import():
    """Test whether the python package can be successfully imported."""
    assert hybrid_shrinkage.__version__ is not None


def test_output_dir_from_environment(monkeypatch, tmp_path):
    """The output directory honours the environment variable."""
    monkeypatch.setenv(utils.OUTPUT_DIR_ENV, str(tmp_path))
    assert utils.get_output_dir() == tmp_path
    monkeypatch.delenv(utils.OUTPUT_DIR_ENV)
    assert str(utils.get_output_dir()) == "."


@pytest.mark.parametrize(
    "value, expected", [(0.0, 0), (0.5, 1), (1.49, 1), (2.5, 3), (100.0, 100)]
)
def test_round_half_up(value, expected):
    """Ties round upwards."""
    assert utils.round_half_up(value) == expected


def test_trial_seed():
    """Trial seeds are the XOR of base seed and index."""
    assert utils.trial_seed(7, 0) == 7
    assert utils.trial_seed(7, 1) == 6
    assert len({utils.trial_seed(12345, i) for i in range(100)}) == 100


def test_streams_are_independent():
    """Equal seeds on different streams give different draws."""
    a = utils.make_rng(3, utils.SIGNAL_STREAM).standard_normal(5)
    b = utils.make_rng(3, utils.NOISE_STREAM).standard_normal(5)
    c = utils.make_rng(3, utils.SIGNAL_STREAM).standard_normal(5)
    assert not np.array_equal(a, b)
    assert np.array_equal(a, c)


def test_ordered_map_threads():
    """Threaded and sequential maps return the same ordered results."""
    items = list(range(50))
    sequential = utils.ordered_map(lambda i: i * i, items)
    threaded = utils.ordered_map(lambda i: i * i, items, threads=4)
    assert sequential == threaded == [i * i for i in items]
