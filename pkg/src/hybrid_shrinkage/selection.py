"""
Parameter tuning and the SURE based hybrid estimator.

Tuning is a grid argmin of the normalized SURE. Grids are scanned in
ascending order and ties resolve to the smallest parameter.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar
from scipy.stats import norm

from hybrid_shrinkage.denoisers import EbParams, _as_eb_params, ebayes, soft_threshold
from hybrid_shrinkage.exceptions import ParameterError
from hybrid_shrinkage.risk import sure_ebayes, sure_soft_threshold
from hybrid_shrinkage.signal import as_vector

LOGGER = logging.getLogger(__name__)

LAMBDA_SEARCH_MAX = 10.0
LAMBDA_TOL = 1e-6


@dataclass(frozen=True)
class Grid:
    """A strictly increasing, nonempty set of positive parameter values."""

    values: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=float).ravel()
        if values.size == 0:
            raise ParameterError("grid must be nonempty")
        if np.any(values <= 0.0) or np.any(np.diff(values) <= 0.0):
            raise ParameterError("grid values must be positive and strictly increasing")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return self.values.size

    def __iter__(self):
        return iter(self.values.tolist())


@dataclass(frozen=True)
class TuningResult:
    """The grid point minimizing a risk estimate and the minimum value."""

    parameter: float
    sure: float


@dataclass(frozen=True)
class HybridChoice:
    """
    Outcome of the SURE comparison between eBayes and soft-thresholding.

    ``gamma`` is 1 when the eBayes estimate was chosen and 0 when the
    soft-thresholding estimate was chosen.
    """

    gamma: int
    estimate: np.ndarray
    sure_eb: float
    sure_st: float
    lam: float = math.nan
    epsilon: float = math.nan

    @property
    def sure(self) -> float:
        """The risk estimate of the chosen estimator."""
        return self.sure_eb if self.gamma == 1 else self.sure_st


def minimax_objective(lam, epsilon: float):
    """
    Return the worst-case soft-thresholding risk over ``epsilon``-sparse signals.

    Parameters
    ----------
    lam : float or numpy.ndarray
        Threshold(s).
    epsilon : float
        Sparsity level in [0, 1].

    Returns
    -------
    float or numpy.ndarray
        ``eps (1 + lam^2) + (1 - eps) [2 (1 + lam^2) Phi(-lam) - 2 lam phi(lam)]``.
    """
    lam = np.asarray(lam, dtype=float)
    zero_part = 2.0 * (1.0 + lam**2) * norm.cdf(-lam) - 2.0 * lam * norm.pdf(lam)
    return epsilon * (1.0 + lam**2) + (1.0 - epsilon) * zero_part


def minimax_lambda(epsilon: float) -> float:
    """
    Find the threshold minimizing the worst-case soft-thresholding risk.

    A coarse scan of ``[0, 10]`` brackets the minimum, which is then refined
    by a bounded scalar search to ``|d lambda| <= 1e-6``.

    Parameters
    ----------
    epsilon : float
        Sparsity level in (0, 1].

    Returns
    -------
    float
        The minimax threshold; exactly 0 when the minimum is at the boundary.
    """
    if not 0.0 < epsilon <= 1.0:
        raise ParameterError(f"epsilon must be in (0, 1], got {epsilon}")
    coarse = np.linspace(0.0, LAMBDA_SEARCH_MAX, 101)
    best = int(np.argmin(minimax_objective(coarse, epsilon)))
    lo = coarse[max(best - 1, 0)]
    hi = coarse[min(best + 1, coarse.size - 1)]
    result = minimize_scalar(
        lambda lam: float(minimax_objective(lam, epsilon)),
        bounds=(lo, hi),
        method="bounded",
        options={"xatol": LAMBDA_TOL},
    )
    lam = float(result.x)
    if minimax_objective(0.0, epsilon) <= minimax_objective(lam, epsilon):
        return 0.0
    return lam


def default_grids(n: int) -> tuple[Grid, Grid]:
    """
    Return the default threshold and mixture weight grids for dimension ``n``.

    Parameters
    ----------
    n : int
        The dimension, at least 2.

    Returns
    -------
    tuple[Grid, Grid]
        ``S = {0.1 i : i = 1..ceil(10 sqrt(2 log n))}`` and
        ``D = {0.02 i : i = 1..50}``.
    """
    if n < 2:
        raise ParameterError(f"default grids need n >= 2, got {n}")
    size = math.ceil(10.0 * math.sqrt(2.0 * math.log(n)))
    thresholds = Grid(0.1 * np.arange(1, size + 1))
    weights = Grid(0.02 * np.arange(1, 51))
    return thresholds, weights


def _grid_argmin(grid: Grid, sures: list[float]) -> TuningResult:
    # np.argmin returns the first minimum, i.e. the smallest grid value
    best = int(np.argmin(np.asarray(sures)))
    return TuningResult(parameter=float(grid.values[best]), sure=float(sures[best]))


def tune_st(y, grid: Grid) -> TuningResult:
    """
    Choose the soft-thresholding threshold minimizing SURE over a grid.

    Parameters
    ----------
    y : Observation or array_like
        The observation.
    grid : Grid
        Candidate thresholds.

    Returns
    -------
    TuningResult
        The minimizing threshold and its normalized SURE.
    """
    values = as_vector(y)
    return _grid_argmin(grid, [sure_soft_threshold(values, lam) for lam in grid])


def tune_eb(
    y, grid: Grid, zero_location: bool = False, include_small_terms: bool = True
) -> TuningResult:
    """
    Choose the eBayes mixture weight minimizing SURE over a grid.

    Parameters
    ----------
    y : Observation or array_like
        The observation.
    grid : Grid
        Candidate mixture weights in (0, 1].
    zero_location : bool
        Use the zero-location estimator.
    include_small_terms : bool
        Passed to the zero-location SURE.

    Returns
    -------
    TuningResult
        The minimizing mixture weight and its normalized SURE.
    """
    values = as_vector(y)
    sures = [
        sure_ebayes(
            values,
            EbParams(epsilon=eps, zero_location=zero_location),
            include_small_terms,
        )
        for eps in grid
    ]
    return _grid_argmin(grid, sures)


def select_gamma(sure_eb: float, sure_st: float) -> int:
    """Return 1 (eBayes) iff its SURE is not larger; ties go to eBayes."""
    return 1 if sure_eb <= sure_st else 0


def hybrid(y, lam: float, epsilon, zero_location: bool = False) -> HybridChoice:
    """
    Choose between eBayes and soft-thresholding by comparing their SUREs.

    Parameters
    ----------
    y : Observation or array_like
        The observation.
    lam : float
        The soft-thresholding threshold.
    epsilon : float or EbParams
        The eBayes mixture weight.
    zero_location : bool
        Use the zero-location eBayes estimator.

    Returns
    -------
    HybridChoice
        ``gamma = 1`` (eBayes) iff the eBayes SURE is not larger than the
        soft-thresholding SURE.
    """
    values = as_vector(y)
    params = _as_eb_params(epsilon, zero_location=zero_location)
    sure_eb = sure_ebayes(values, params, include_small_terms=True)
    sure_st = sure_soft_threshold(values, lam)
    gamma = select_gamma(sure_eb, sure_st)
    estimate = ebayes(values, params) if gamma else soft_threshold(values, lam)
    return HybridChoice(
        gamma=gamma,
        estimate=estimate,
        sure_eb=sure_eb,
        sure_st=sure_st,
        lam=float(lam),
        epsilon=params.epsilon,
    )


def hybrid_tuned(
    y, thresholds: Grid, weights: Grid, zero_location: bool = False
) -> HybridChoice:
    """
    Tune both estimators on their grids, then choose by comparing SUREs.

    Parameters
    ----------
    y : Observation or array_like
        The observation.
    thresholds : Grid
        Candidate soft-thresholding thresholds.
    weights : Grid
        Candidate eBayes mixture weights.
    zero_location : bool
        Use the zero-location eBayes estimator.

    Returns
    -------
    HybridChoice
        The choice at the tuned ``(lambda*, epsilon*)``.
    """
    values = as_vector(y)
    best_lam = tune_st(values, thresholds)
    best_eps = tune_eb(values, weights, zero_location=zero_location)
    LOGGER.debug(
        "tuned lambda*=%g (sure %.6g), epsilon*=%g (sure %.6g)",
        best_lam.parameter,
        best_lam.sure,
        best_eps.parameter,
        best_eps.sure,
    )
    return hybrid(values, best_lam.parameter, best_eps.parameter, zero_location)
