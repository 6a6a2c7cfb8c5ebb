"""Contains utility functions used throughout the python package."""

import logging
import pathlib
from collections.abc import Callable, Iterable
from concurrent.futures import ThreadPoolExecutor
from os import getenv

import numpy as np

LOGGER = logging.getLogger(__name__)

OUTPUT_DIR_ENV = "HYBRID_SHRINKAGE_OUTPUT_DIR"

# Stream tags keep draws that share an integer seed statistically independent.
SIGNAL_STREAM = 0
NOISE_STREAM = 1
MATRIX_STREAM = 2


def get_output_dir() -> pathlib.Path:
    """
    Return the default directory for experiment output files.

    The directory is read from the environment variable
    ``HYBRID_SHRINKAGE_OUTPUT_DIR`` and falls back to the current working
    directory when it is not set.

    Returns
    -------
    pathlib.Path
        The default output directory.
    """
    return pathlib.Path(getenv(OUTPUT_DIR_ENV, "."))


def trial_seed(base_seed: int, index: int) -> int:
    """
    Return the seed of Monte Carlo trial ``index``.

    Parameters
    ----------
    base_seed : int
        The non-negative seed of the whole run.
    index : int
        The trial index.

    Returns
    -------
    int
        ``base_seed XOR index``, so any subset of trials can be replayed
        independently of the order in which they are executed.
    """
    return int(base_seed) ^ int(index)


def make_rng(seed: int, stream: int = SIGNAL_STREAM) -> np.random.Generator:
    """
    Create the PCG64 generator for a seed and stream tag.

    Parameters
    ----------
    seed : int
        A non-negative integer seed.
    stream : int
        One of the ``*_STREAM`` tags.

    Returns
    -------
    numpy.random.Generator
        A generator backed by ``numpy.random.PCG64`` seeded with the
        ``SeedSequence`` of ``[seed, stream]``.
    """
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, stream])))


def round_half_up(value: float) -> int:
    """Round a non-negative real to the nearest integer, ties upwards."""
    return int(np.floor(value + 0.5))


def ordered_map(func: Callable, items: Iterable, threads: int = 1) -> list:
    """
    Apply ``func`` to every item and return results in input order.

    Parameters
    ----------
    func : Callable
        A pure function of one argument.
    items : Iterable
        The arguments.
    threads : int
        The number of worker threads; 1 runs sequentially.

    Returns
    -------
    list
        ``[func(item) for item in items]``, identical for any ``threads``.
    """
    if threads <= 1:
        return [func(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(func, items))
