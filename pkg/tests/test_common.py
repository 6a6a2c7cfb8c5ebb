"""Tests for file handling and flat configuration files."""

import json

import numpy as np
import pytest

from hybrid_shrinkage.common.config import (
    apply_settings,
    coerce,
    load_config,
    parse_config,
)
from hybrid_shrinkage.common.file_handling import (
    format_value,
    format_vector,
    read_vector,
    write_csv,
    write_jsonl,
    write_vector,
)
from hybrid_shrinkage.exceptions import (
    ConfigParseError,
    InputOutputError,
    ParameterError,
    VectorParseError,
)
from hybrid_shrinkage.experiments import AmpConfig, SweepConfig


def test_read_vector_skips_comments(vector_file):
    """Blank lines and comments are ignored."""
    path = vector_file("# estimator = st\n1.5\n\n-2  # trailing\n3e-2\n")
    assert np.array_equal(read_vector(path), [1.5, -2.0, 0.03])


@pytest.mark.parametrize(
    "text, line", [("1\nabc\n", 2), ("1\n2\nnan\n", 3), ("inf\n", 1), ("# none\n", 0)]
)
def test_read_vector_errors(vector_file, text, line):
    """Malformed files report the offending line."""
    with pytest.raises(VectorParseError) as info:
        read_vector(vector_file(text))
    assert info.value.line == line
    assert info.value.exit_code == 4


def test_read_vector_missing_file(tmp_path):
    """A missing file is an I/O error."""
    with pytest.raises(InputOutputError) as info:
        read_vector(tmp_path / "missing.txt")
    assert info.value.exit_code == 3


def test_format_value():
    """Floats keep full double precision."""
    assert format_value(0.1) == "0.10000000000000001"
    assert format_value(np.float64(2.0)) == "2"
    assert format_value("st") == "st"
    assert format_value(7) == "7"


def test_write_vector_with_comments(tmp_path):
    """Diagnostics go to comment lines above the values."""
    path = tmp_path / "out" / "theta.txt"
    write_vector(path, [1.0, -0.25], {"lambda": 1.5, "gamma": 1})
    assert path.read_text() == "# lambda = 1.5\n# gamma = 1\n1\n-0.25\n"
    assert np.array_equal(read_vector(path), [1.0, -0.25])
    assert format_vector([0.0]) == "0\n"


def test_write_csv_line_endings(tmp_path):
    """CSV output uses line feeds only."""
    path = tmp_path / "table.csv"
    write_csv(path, ("a", "b"), [(1, 0.5), (2, "x")])
    assert path.read_bytes() == b"a,b\n1,0.5\n2,x\n"


def test_write_jsonl_sorts_keys(tmp_path):
    """Records are written one per line with sorted keys."""
    path = tmp_path / "report.jsonl"
    write_jsonl(path, [{"b": 1, "a": True}, {"c": 0.5}])
    lines = path.read_text().splitlines()
    assert lines[0] == '{"a": true, "b": 1}'
    assert json.loads(lines[1]) == {"c": 0.5}


def test_parse_config():
    """Keys are normalized and comments dropped."""
    text = "# sweep\npreset = fig1\ntrials = 50  # quick\n\nzero-location = true\n"
    assert parse_config(text) == {
        "preset": "fig1",
        "trials": "50",
        "zero_location": "true",
    }


@pytest.mark.parametrize("text, line", [("n 100\n", 1), ("n = 1\nn = 2\n", 2)])
def test_parse_config_errors(text, line):
    """Malformed lines and duplicate keys are parse errors."""
    with pytest.raises(ConfigParseError) as info:
        parse_config(text, "run.cfg")
    assert info.value.line == line


def test_load_config(tmp_path):
    """Configuration files are read from disk."""
    path = tmp_path / "run.cfg"
    path.write_text("sigma = 0.5\n")
    assert load_config(path) == {"sigma": "0.5"}
    with pytest.raises(InputOutputError):
        load_config(tmp_path / "missing.cfg")


def test_coerce():
    """Strings are converted to the trait types."""
    config = SweepConfig()
    assert coerce(config, "n", "500") == 500
    assert coerce(config, "etas", "0.1, 0.2") == [0.1, 0.2]
    assert coerce(config, "zero_location", "true") is True
    assert coerce(config, "family", "const:3").label == "const:3"
    with pytest.raises(ParameterError):
        coerce(config, "n", "many")
    with pytest.raises(ParameterError):
        coerce(config, "lambda", "1")


def test_apply_settings():
    """Settings are applied and validated."""
    config = apply_settings(AmpConfig(), {"sigma": "0.5", "iterations": 3})
    assert config.sigma == 0.5
    assert config.iterations == 3
    with pytest.raises(ParameterError):
        apply_settings(AmpConfig(), {"delta": "1.5"})
    with pytest.raises(ParameterError):
        apply_settings(AmpConfig(), {"family": "cauchy"})
