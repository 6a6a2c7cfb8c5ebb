"""
Soft-thresholding, empirical Bayes and positive-part Lindley denoisers.

All denoisers assume unit-variance Gaussian noise. The empirical Bayes
(eBayes) estimator is the posterior mean under a Bernoulli-Gaussian prior
with mixture weight ``epsilon`` whose location and scale are estimated from
the data.
"""

import logging
from dataclasses import dataclass

import numpy as np
import traitlets as tl
from scipy.special import expit

from hybrid_shrinkage.exceptions import DimensionError, ParameterError
from hybrid_shrinkage.signal import as_vector

LOGGER = logging.getLogger(__name__)


class SoftThresholdParams(tl.HasTraits):
    """Parameters of the soft-thresholding estimator."""

    lam = tl.Float(0.0)

    @tl.validate("lam")
    def _valid_lam(self, proposal):
        if not proposal["value"] >= 0.0:
            raise ParameterError(f"lambda must be >= 0, got {proposal['value']}")
        return proposal["value"]


class EbParams(tl.HasTraits):
    """Parameters of the empirical Bayes estimator."""

    epsilon = tl.Float(1.0)
    zero_location = tl.Bool(False)

    @tl.validate("epsilon")
    def _valid_epsilon(self, proposal):
        if not 0.0 < proposal["value"] <= 1.0:
            raise ParameterError(f"epsilon must be in (0, 1], got {proposal['value']}")
        return proposal["value"]


def _as_eb_params(params, zero_location: bool = False) -> EbParams:
    if isinstance(params, EbParams):
        return params
    return EbParams(epsilon=float(params), zero_location=zero_location)


def _as_lambda(params) -> float:
    if isinstance(params, SoftThresholdParams):
        return params.lam
    return SoftThresholdParams(lam=float(params)).lam


@dataclass(frozen=True)
class EbStatistics:
    """
    The data dependent quantities shared by the eBayes estimator and its SURE.

    ``b`` holds ``1 + c_y * exp(exponent)`` per component, where the exponent
    is ``-a_y * y_i**2 / 2`` for the zero-location estimator and
    ``-y_i**2 / 2 + (y_i - mu_hat)**2 / (2 d_y)`` in general. ``log_weight``
    stores ``log(c_y) + exponent`` so ``1 / b`` can be evaluated without
    overflow.
    """

    mu_hat: float
    xi2_hat: float
    a_y: float
    d_y: float
    c_y: float
    b: np.ndarray
    log_weight: np.ndarray
    epsilon: float
    zero_location: bool

    @property
    def inv_b(self) -> np.ndarray:
        """``1 / b_i`` evaluated as a logistic function."""
        return expit(-self.log_weight)

    @property
    def weight_fraction(self) -> np.ndarray:
        """``(b_i - 1) / b_i`` evaluated as a logistic function."""
        return expit(self.log_weight)


def soft_threshold(y, params) -> np.ndarray:
    """
    Soft-threshold an observation componentwise.

    Parameters
    ----------
    y : Observation or array_like
        The observation.
    params : SoftThresholdParams or float
        The threshold ``lambda >= 0``.

    Returns
    -------
    numpy.ndarray
        ``sign(y) * max(|y| - lambda, 0)``.
    """
    values = as_vector(y)
    lam = _as_lambda(params)
    return np.sign(values) * np.maximum(np.abs(values) - lam, 0.0)


def soft_threshold_derivative(y, params) -> np.ndarray:
    """Return ``1{|y_i| > lambda}``, the derivative of soft-thresholding."""
    return (np.abs(as_vector(y)) > _as_lambda(params)).astype(float)


def eb_statistics(y, params) -> EbStatistics:
    """
    Compute the plug-in statistics of the eBayes estimator.

    Parameters
    ----------
    y : Observation or array_like
        The observation.
    params : EbParams or float
        Mixture weight and location mode; a float is read as ``epsilon``
        with the general (estimated location) estimator.

    Returns
    -------
    EbStatistics
        ``mu_hat = mean(y) / epsilon`` (0 for zero-location),
        ``xi2_hat`` the positive-part scale estimate, and the derived
        ``a_y``, ``d_y``, ``c_y`` and ``b``.
    """
    params = _as_eb_params(params)
    values = as_vector(y)
    eps = params.epsilon
    second_moment = float(np.mean(values**2))
    if params.zero_location:
        mu_hat = 0.0
        xi2_hat = max(second_moment - 1.0, 0.0) / eps
    else:
        mean = float(np.mean(values))
        mu_hat = mean / eps
        xi2_hat = max(second_moment - mean**2 / eps - 1.0, 0.0) / eps
    d_y = 1.0 + xi2_hat
    a_y = xi2_hat / d_y
    c_y = (1.0 - eps) / eps * np.sqrt(d_y)
    exponent = -(values**2) / 2.0 + (values - mu_hat) ** 2 / (2.0 * d_y)
    with np.errstate(divide="ignore", over="ignore"):
        log_weight = np.log(c_y) + exponent
        b = np.exp(np.logaddexp(0.0, log_weight))
    return EbStatistics(
        mu_hat=mu_hat,
        xi2_hat=xi2_hat,
        a_y=a_y,
        d_y=d_y,
        c_y=float(c_y),
        b=b,
        log_weight=log_weight,
        epsilon=eps,
        zero_location=params.zero_location,
    )


def ebayes(y, params, stats: EbStatistics = None) -> np.ndarray:
    """
    Apply the empirical Bayes estimator.

    Parameters
    ----------
    y : Observation or array_like
        The observation.
    params : EbParams or float
        Mixture weight and location mode.
    stats : EbStatistics, optional
        Precomputed statistics of ``y``.

    Returns
    -------
    numpy.ndarray
        ``(mu_hat + a_y (y_i - mu_hat)) / b_i`` for every component.
    """
    values = as_vector(y)
    if stats is None:
        stats = eb_statistics(values, params)
    numerator = stats.mu_hat + stats.a_y * (values - stats.mu_hat)
    return numerator * stats.inv_b


def ebayes_jacobian_diagonal(
    y, params, through_globals: bool = True, stats: EbStatistics = None
) -> np.ndarray:
    """
    Return the diagonal of the Jacobian of the eBayes estimator.

    Parameters
    ----------
    y : Observation or array_like
        The observation.
    params : EbParams or float
        Mixture weight and location mode.
    through_globals : bool
        If True differentiate through ``mu_hat`` and ``xi2_hat`` (both depend
        on every ``y_i``); if False treat them as constants, i.e. the
        componentwise derivative used in the AMP Onsager term.
    stats : EbStatistics, optional
        Precomputed statistics of ``y``.

    Returns
    -------
    numpy.ndarray
        ``d theta_i / d y_i`` for every component.
    """
    values = as_vector(y)
    if stats is None:
        stats = eb_statistics(values, params)
    n = values.size
    eps, mu, d, a = stats.epsilon, stats.mu_hat, stats.d_y, stats.a_y
    centred = values - mu

    d_mu = 0.0
    d_d = np.zeros(n)
    if through_globals:
        if not stats.zero_location:
            d_mu = 1.0 / (n * eps)
        if stats.xi2_hat > 0.0:
            # d xi2 / d y_i, nonzero only where the positive part is active
            d_d = 2.0 * centred / (n * eps)
    d_a = d_d / d**2

    numerator = mu + a * centred
    d_numerator = a + (1.0 - a) * d_mu + d_a * centred
    d_log_weight = (
        d_d / (2.0 * d)
        - values
        + centred * (1.0 - d_mu) / d
        - centred**2 * d_d / (2.0 * d**2)
    )
    inv_b = stats.inv_b
    return inv_b * (d_numerator - numerator * stats.weight_fraction * d_log_weight)


def lindley_positive_part(y) -> np.ndarray:
    """
    Apply the positive-part Lindley shrinkage estimator.

    Parameters
    ----------
    y : Observation or array_like
        The observation, of length at least 4.

    Returns
    -------
    numpy.ndarray
        ``mean(y) + (1 - (n - 3) / ||y - mean(y)||^2)_+ (y - mean(y))``.
    """
    values = as_vector(y)
    n = values.size
    if n < 4:
        raise DimensionError(f"Lindley's estimator needs n >= 4, got {n}")
    mean = float(np.mean(values))
    deviation = values - mean
    spread = float(np.sum(deviation**2))
    if spread == 0.0:
        return np.full(n, mean)
    factor = max(1.0 - (n - 3) / spread, 0.0)
    return mean + factor * deviation
