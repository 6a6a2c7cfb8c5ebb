"""
Stein unbiased risk estimates (SURE) for the denoisers.

Every public ``sure_*`` function returns the risk estimate normalized by
``n``; only :func:`sure_generic` returns the unnormalized form
``-n + ||y - estimate||^2 + 2 * divergence``.
"""

import logging
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np
from scipy.stats import norm

from hybrid_shrinkage.denoisers import (
    EbParams,
    _as_eb_params,
    _as_lambda,
    eb_statistics,
    ebayes,
    ebayes_jacobian_diagonal,
    soft_threshold,
)
from hybrid_shrinkage.exceptions import DimensionError, ParameterError
from hybrid_shrinkage.signal import as_vector, squared_loss

LOGGER = logging.getLogger(__name__)

FD_STEP = 1e-5


@dataclass(frozen=True)
class RiskReport:
    """Loss, risk estimate and selected parameter of one estimator on one trial."""

    estimator: str
    loss: float
    sure: float
    parameter: float

    def __post_init__(self):
        if not self.loss >= 0.0:
            raise ParameterError(f"normalized loss must be >= 0, got {self.loss}")


def risk_report(tag: str, theta, estimate, sure: float, parameter: float) -> RiskReport:
    """Build the per-trial record of an estimator from its estimate."""
    n = as_vector(theta).size
    return RiskReport(
        estimator=tag,
        loss=squared_loss(theta, estimate) / n,
        sure=float(sure),
        parameter=float(parameter),
    )


def sure_generic(y, estimate, divergence: float) -> float:
    """
    Evaluate Stein's unbiased risk estimate from its ingredients.

    Parameters
    ----------
    y : Observation or array_like
        The observation.
    estimate : array_like
        The estimate computed from ``y``.
    divergence : float
        ``sum_i d estimate_i / d y_i``.

    Returns
    -------
    float
        The unnormalized SURE ``-n + ||y - estimate||^2 + 2 * divergence``.
    """
    values = as_vector(y)
    guess = as_vector(estimate)
    if values.shape != guess.shape:
        raise DimensionError(
            f"SURE needs equal lengths, got {values.size} and {guess.size}"
        )
    return float(-values.size + np.sum((values - guess) ** 2) + 2.0 * divergence)


def divergence_fd(denoiser: Callable, y, h: float = FD_STEP) -> float:
    """
    Estimate the divergence of a denoiser by central differences.

    Each coordinate is perturbed in turn and the whole denoiser is
    re-evaluated, so data dependent global statistics are differentiated
    through as well.

    Parameters
    ----------
    denoiser : Callable
        Maps a vector to an estimate of the same length.
    y : Observation or array_like
        The point at which the divergence is evaluated.
    h : float
        The step size.

    Returns
    -------
    float
        ``sum_i (f_i(y + h e_i) - f_i(y - h e_i)) / (2 h)``.
    """
    if not h > 0.0:
        raise ParameterError(f"finite difference step must be > 0, got {h}")
    values = np.array(as_vector(y), dtype=float)
    slopes = np.empty(values.size)
    for i in range(values.size):
        original = values[i]
        values[i] = original + h
        upper = denoiser(values)[i]
        values[i] = original - h
        lower = denoiser(values)[i]
        values[i] = original
        slopes[i] = (upper - lower) / (2.0 * h)
    return float(np.sum(slopes))


def sure_soft_threshold(y, lam) -> float:
    """
    Return the normalized SURE of soft-thresholding.

    Parameters
    ----------
    y : Observation or array_like
        The observation.
    lam : SoftThresholdParams or float
        The threshold.

    Returns
    -------
    float
        ``-1 + ||y - ST(y)||^2 / n + (2 / n) #{i : y_i^2 > lambda^2}``.
    """
    values = as_vector(y)
    lam = _as_lambda(lam)
    residual = values - soft_threshold(values, lam)
    alive = np.count_nonzero(values**2 > lam**2)
    return float(-1.0 + np.mean(residual**2) + 2.0 * alive / values.size)


def sure_ebayes_zero_location(
    y, epsilon, include_small_terms: bool = True
) -> float:
    """
    Return the normalized SURE of the zero-location eBayes estimator.

    Parameters
    ----------
    y : Observation or array_like
        The observation.
    epsilon : float
        The prior mixture weight in (0, 1].
    include_small_terms : bool
        Keep the three correction terms of order ``1 / n`` that come from
        differentiating ``a_y`` and ``c_y``; they may be dropped for speed.

    Returns
    -------
    float
        The risk estimate per component.
    """
    params = _as_eb_params(epsilon, zero_location=True)
    if not params.zero_location:
        params = EbParams(epsilon=params.epsilon, zero_location=True)
    values = as_vector(y)
    n = values.size
    stats = eb_statistics(values, params)
    eps, a, d = params.epsilon, stats.a_y, stats.d_y
    y2 = values**2
    inv_b = stats.inv_b
    # c_y * exp(-a_y y_i^2 / 2) / b_i, i.e. (b_i - 1) / b_i
    frac = stats.weight_fraction

    value = (
        (np.mean(y2) - 1.0)
        + a**2 * np.mean(y2 * inv_b * (inv_b + 2.0 * frac))
        - 2.0 * a * np.mean((y2 - 1.0) * inv_b)
    )
    if include_small_terms and stats.xi2_hat > 0.0:
        # (1 - eps) e^{-a y^2/2} / (eps^2 d^{k}) == c_y e^{-a y^2/2} / (eps d^{k+1/2})
        value += 4.0 / (d**2 * eps * n**2) * np.sum(y2 * inv_b)
        value += 2.0 * a / (d**2 * eps * n**2) * np.sum(y2**2 * frac * inv_b)
        value -= 2.0 * a / (d * eps * n**2) * np.sum(y2 * frac * inv_b)
    return float(value)


def sure_ebayes_general(y, epsilon) -> float:
    """
    Return the normalized SURE of the general (estimated location) eBayes estimator.

    Parameters
    ----------
    y : Observation or array_like
        The observation.
    epsilon : float
        The prior mixture weight in (0, 1].

    Returns
    -------
    float
        The risk estimate per component, using the analytic divergence
        that differentiates through the estimated location and scale.
    """
    params = _as_eb_params(epsilon)
    if params.zero_location:
        params = EbParams(epsilon=params.epsilon, zero_location=False)
    values = as_vector(y)
    stats = eb_statistics(values, params)
    estimate = ebayes(values, params, stats=stats)
    divergence = np.sum(ebayes_jacobian_diagonal(values, params, stats=stats))
    return sure_generic(values, estimate, divergence) / values.size


def sure_ebayes(y, params, include_small_terms: bool = True) -> float:
    """Return the normalized eBayes SURE for either location mode."""
    params = _as_eb_params(params)
    if params.zero_location:
        return sure_ebayes_zero_location(y, params.epsilon, include_small_terms)
    return sure_ebayes_general(y, params.epsilon)


def soft_threshold_risk(theta, lam) -> float:
    """
    Return the exact normalized risk of soft-thresholding at a known signal.

    Parameters
    ----------
    theta : Signal or array_like
        The true signal.
    lam : SoftThresholdParams or float
        The threshold.

    Returns
    -------
    float
        ``E ||ST(theta + w) - theta||^2 / n`` for ``w ~ N(0, I)``.
    """
    mu = as_vector(theta)
    lam = _as_lambda(lam)
    inside = norm.cdf(lam - mu) - norm.cdf(-lam - mu)
    risk = (
        1.0
        + lam**2
        + (mu**2 - lam**2 - 1.0) * inside
        - (lam - mu) * norm.pdf(lam + mu)
        - (lam + mu) * norm.pdf(lam - mu)
    )
    return float(np.mean(risk))
