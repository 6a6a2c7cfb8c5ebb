"""Module for providing functionality to deal with files."""

import csv
import json
import logging
import pathlib
from collections.abc import Iterable, Sequence

import numpy as np

from hybrid_shrinkage.exceptions import InputOutputError, VectorParseError

LOGGER = logging.getLogger(__name__)

FLOAT_FORMAT = ".17g"


def format_value(value) -> str:
    """Format a CSV/vector field, floats at full double precision."""
    if isinstance(value, (float, np.floating)):
        return format(float(value), FLOAT_FORMAT)
    return str(value)


def _open(path: pathlib.Path, mode: str):
    try:
        if "w" in mode:
            path.parent.mkdir(parents=True, exist_ok=True)
        return path.open(mode, encoding="utf-8", newline="")
    except OSError as err:
        raise InputOutputError(path, err.strerror or str(err)) from err


def read_vector(path) -> np.ndarray:
    """
    Read a vector file.

    Parameters
    ----------
    path : str or pathlib.Path
        A text file holding one decimal number per line. Blank lines and
        anything after a ``#`` are ignored.

    Returns
    -------
    numpy.ndarray
        The vector in file order.
    """
    path = pathlib.Path(path)
    values = []
    with _open(path, "r") as handle:
        for lineno, line in enumerate(handle, start=1):
            text = line.split("#", 1)[0].strip()
            if not text:
                continue
            try:
                value = float(text)
            except ValueError as err:
                raise VectorParseError(path, lineno, f"not a number: '{text}'") from err
            if not np.isfinite(value):
                raise VectorParseError(path, lineno, f"non-finite value '{text}'")
            values.append(value)
    if not values:
        raise VectorParseError(path, 0, "file holds no values")
    LOGGER.debug("read %d values from %s", len(values), path)
    return np.array(values)


def format_vector(values, comments: dict = None) -> str:
    """Render a vector file, ``# key = value`` comment lines first."""
    comments = comments or {}
    lines = [f"# {key} = {format_value(value)}" for key, value in comments.items()]
    lines.extend(format_value(value) for value in np.asarray(values, dtype=float))
    return "\n".join(lines) + "\n"


def write_vector(path, values, comments: dict = None) -> None:
    """
    Write a vector file, optionally preceded by ``# key = value`` lines.

    Parameters
    ----------
    path : str or pathlib.Path
        The destination file.
    values : array_like
        The vector.
    comments : dict, optional
        Diagnostics written as comment lines above the values.
    """
    path = pathlib.Path(path)
    with _open(path, "w") as handle:
        handle.write(format_vector(values, comments))
    return


def write_csv(path, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    """
    Write a table as line-feed terminated CSV.

    Parameters
    ----------
    path : str or pathlib.Path
        The destination file.
    header : Sequence[str]
        The column names.
    rows : Iterable[Sequence]
        The records, fields in header order.
    """
    path = pathlib.Path(path)
    with _open(path, "w") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([format_value(field) for field in row])
    LOGGER.info("wrote %s", path)
    return


def write_jsonl(path, records: Iterable[dict]) -> None:
    """Write one JSON object per line."""
    path = pathlib.Path(path)
    with _open(path, "w") as handle:
        for record in records:
            handle.write(json.dumps(record, sort_keys=True) + "\n")
    LOGGER.info("wrote %s", path)
    return
