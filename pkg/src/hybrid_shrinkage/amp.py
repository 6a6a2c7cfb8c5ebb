"""
Approximate message passing (AMP) for compressed sensing ``y = A theta + w``.

Each iteration forms the effective observation ``u = A^T z + theta``,
denoises it at the estimated noise level ``tau_hat = ||z|| / sqrt(m)`` and
updates the Onsager-corrected residual. Denoiser parameters are tuned per
iteration by minimizing the candidate residual norm over a grid.
"""

import enum
import logging
import math
from dataclasses import dataclass

import numpy as np
import traitlets as tl

from hybrid_shrinkage.denoisers import (
    EbParams,
    eb_statistics,
    ebayes,
    ebayes_jacobian_diagonal,
    soft_threshold,
)
from hybrid_shrinkage.exceptions import (
    DimensionError,
    NumericalDivergenceError,
    ParameterError,
)
from hybrid_shrinkage.selection import Grid
from hybrid_shrinkage.signal import Signal
from hybrid_shrinkage.utils import MATRIX_STREAM, NOISE_STREAM, make_rng, round_half_up

LOGGER = logging.getLogger(__name__)


class DenoiserFamily(enum.Enum):
    """The denoiser used inside AMP."""

    ST = "st"
    EB = "eb"
    HYBRID = "hybrid"


@dataclass(frozen=True)
class MeasurementModel:
    """A compressed sensing problem ``y_meas = A theta + sigma w``."""

    A: np.ndarray
    y_meas: np.ndarray
    sigma: float
    theta_true: Signal = None

    def __post_init__(self):
        m, n = self.A.shape
        if not 1 <= m < n:
            raise DimensionError(f"need 1 <= m < n, got A of shape {self.A.shape}")
        if self.y_meas.shape != (m,):
            raise DimensionError(f"y_meas must have length {m}")
        if self.theta_true is not None and self.theta_true.n != n:
            raise DimensionError(f"theta_true must have length {n}")
        if not self.sigma >= 0.0:
            raise ParameterError(f"sigma must be >= 0, got {self.sigma}")

    @property
    def m(self) -> int:
        """The number of measurements."""
        return self.A.shape[0]

    @property
    def n(self) -> int:
        """The signal dimension."""
        return self.A.shape[1]

    @property
    def delta(self) -> float:
        """The undersampling ratio ``m / n``."""
        return self.m / self.n


@dataclass(frozen=True)
class AmpState:
    """The full AMP iterate."""

    theta: np.ndarray
    z: np.ndarray
    tau_hat: float
    t: int
    chosen_param: float = math.nan
    chosen_denoiser: DenoiserFamily = None


@dataclass(frozen=True)
class TrajectoryRow:
    """Per-iteration summary of an AMP run."""

    t: int
    mse: float
    tau_hat: float
    chosen_param: float
    chosen_denoiser: str
    se_prediction: float


class AmpOptions(tl.HasTraits):
    """Options controlling parameter tuning inside AMP."""

    freeze = tl.Bool(False)
    freeze_after = tl.Int(1)
    hybrid_freeze_after = tl.Int(10)
    zero_location = tl.Bool(False)

    @tl.validate("freeze_after", "hybrid_freeze_after")
    def _valid_iteration(self, proposal):
        if proposal["value"] < 1:
            raise ParameterError(
                f"{proposal['trait'].name} must be >= 1, got {proposal['value']}"
            )
        return proposal["value"]


def generate_measurement(
    n: int, delta: float, sigma: float, signal: Signal, seed: int
) -> MeasurementModel:
    """
    Draw a Gaussian measurement matrix and noisy measurements of a signal.

    Parameters
    ----------
    n : int
        The signal dimension.
    delta : float
        The undersampling ratio in (0, 1); ``m = round(delta * n)``.
    sigma : float
        The measurement noise standard deviation.
    signal : Signal
        The signal to measure.
    seed : int
        Seed for the matrix and the noise.

    Returns
    -------
    MeasurementModel
        ``A`` with i.i.d. ``N(0, 1/m)`` entries and ``y = A theta + sigma w``.
    """
    if not 0.0 < delta < 1.0:
        raise ParameterError(f"delta must be in (0, 1), got {delta}")
    if signal.n != n:
        raise DimensionError(f"signal has length {signal.n}, expected {n}")
    m = round_half_up(delta * n)
    if not 1 <= m < n:
        raise ParameterError(f"round(delta * n) = {m} must be in [1, n)")
    A = make_rng(seed, MATRIX_STREAM).standard_normal((m, n)) / np.sqrt(m)
    y_meas = A @ signal.values
    if sigma > 0.0:
        y_meas = y_meas + sigma * make_rng(seed, NOISE_STREAM).standard_normal(m)
    return MeasurementModel(A=A, y_meas=y_meas, sigma=float(sigma), theta_true=signal)


def initial_state(model: MeasurementModel) -> AmpState:
    """Return the state ``theta_0 = 0``, ``z_0 = y``."""
    return AmpState(
        theta=np.zeros(model.n),
        z=model.y_meas.copy(),
        tau_hat=float(np.linalg.norm(model.y_meas) / np.sqrt(model.m)),
        t=0,
    )


def scaled_denoiser(
    u: np.ndarray, tau: float, family: DenoiserFamily, param: float, zero_location=False
) -> tuple[np.ndarray, float]:
    """
    Denoise an effective observation with noise level ``tau``.

    Parameters
    ----------
    u : numpy.ndarray
        The effective observation.
    tau : float
        The noise standard deviation.
    family : DenoiserFamily
        ``ST`` or ``EB``.
    param : float
        Threshold in units of ``tau`` (ST) or mixture weight (EB).
    zero_location : bool
        Use the zero-location eBayes estimator.

    Returns
    -------
    tuple[numpy.ndarray, float]
        ``tau * f(u / tau)`` and the mean derivative ``<f'(u)>``, with the
        eBayes global statistics held fixed.
    """
    if tau <= 0.0:
        # noiseless effective observation, nothing to denoise
        return u.copy(), 1.0
    if family is DenoiserFamily.ST:
        estimate = soft_threshold(u, param * tau)
        return estimate, float(np.mean(np.abs(u) > param * tau))
    if family is DenoiserFamily.EB:
        params = EbParams(epsilon=param, zero_location=zero_location)
        scaled = u / tau
        stats = eb_statistics(scaled, params)
        estimate = tau * ebayes(scaled, params, stats=stats)
        slope = ebayes_jacobian_diagonal(
            scaled, params, through_globals=False, stats=stats
        )
        return estimate, float(np.mean(slope))
    raise ParameterError(f"no scaled denoiser for family {family}")


def _candidate(model, state, u, family, param, zero_location):
    theta, slope = scaled_denoiser(u, state.tau_hat, family, param, zero_location)
    z = model.y_meas - model.A @ theta + state.z * slope / model.delta
    return theta, z


def _check_finite(theta, z, t, family, param):
    if not (np.all(np.isfinite(theta)) and np.all(np.isfinite(z))):
        raise NumericalDivergenceError(
            t,
            "non-finite estimate or residual",
            {"family": family.value, "param": param},
        )


def amp_step(
    model: MeasurementModel,
    state: AmpState,
    family: DenoiserFamily,
    param: float,
    zero_location: bool = False,
) -> AmpState:
    """
    Perform one AMP iteration with a fixed denoiser parameter.

    Parameters
    ----------
    model : MeasurementModel
        The measurement model.
    state : AmpState
        The previous iterate.
    family : DenoiserFamily
        ``ST`` or ``EB``.
    param : float
        The denoiser parameter.
    zero_location : bool
        Use the zero-location eBayes estimator.

    Returns
    -------
    AmpState
        The next iterate with ``tau_hat = ||z_t|| / sqrt(m)``.
    """
    u = model.A.T @ state.z + state.theta
    theta, z = _candidate(model, state, u, family, param, zero_location)
    _check_finite(theta, z, state.t + 1, family, param)
    return AmpState(
        theta=theta,
        z=z,
        tau_hat=float(np.linalg.norm(z) / np.sqrt(model.m)),
        t=state.t + 1,
        chosen_param=float(param),
        chosen_denoiser=family,
    )


def _search(model, state, u, family, grid, zero_location):
    best = None
    for param in grid:
        theta, z = _candidate(model, state, u, family, param, zero_location)
        _check_finite(theta, z, state.t + 1, family, param)
        norm2 = float(z @ z)
        if best is None or norm2 < best[0]:
            best = (norm2, param, theta, z)
    return best


def se_prediction(
    z_st_norm2: float, z_eb_norm2: float, m: int, delta: float, sigma: float
) -> float:
    """
    Return the state evolution estimate of the AMP mean squared error.

    Parameters
    ----------
    z_st_norm2, z_eb_norm2 : float
        Squared residual norms of the soft-thresholding and eBayes candidates.
    m : int
        The number of measurements.
    delta : float
        The undersampling ratio.
    sigma : float
        The measurement noise standard deviation.

    Returns
    -------
    float
        ``delta * (tau_hat^2 - sigma^2)_+`` with
        ``tau_hat^2 = min(z_st_norm2, z_eb_norm2) / m``.
    """
    if z_st_norm2 < 0.0 or z_eb_norm2 < 0.0:
        raise ParameterError("squared residual norms must be >= 0")
    tau2 = min(z_st_norm2, z_eb_norm2) / m
    return delta * max(tau2 - sigma**2, 0.0)


def _mse(model: MeasurementModel, theta: np.ndarray) -> float:
    if model.theta_true is None:
        return math.nan
    return float(np.mean((theta - model.theta_true.values) ** 2))


def amp_run(
    model: MeasurementModel,
    family: DenoiserFamily,
    iterations: int,
    grids: tuple[Grid, Grid],
    options: AmpOptions = None,
) -> list[TrajectoryRow]:
    """
    Run AMP with per-iteration residual based parameter tuning.

    For every grid value the candidate pair ``(theta_t, z_t)`` is computed
    from a shared effective observation, and the candidate with the smallest
    ``||z_t||^2`` is carried forward. The hybrid runs both searches and
    keeps the family whose best candidate has the smaller residual.

    Parameters
    ----------
    model : MeasurementModel
        The measurement model.
    family : DenoiserFamily
        ``ST``, ``EB`` or ``HYBRID``.
    iterations : int
        The number of iterations ``T``; ``0`` returns the initial state only.
    grids : tuple[Grid, Grid]
        Threshold grid (in units of ``tau_hat``) and mixture weight grid.
    options : AmpOptions, optional
        Parameter and family freezing options.

    Returns
    -------
    list[TrajectoryRow]
        One row per iteration ``t = 0 .. T``.
    """
    if iterations < 0:
        raise ParameterError(f"iterations must be >= 0, got {iterations}")
    options = options or AmpOptions()
    thresholds, weights = grids
    state = initial_state(model)
    z0 = float(state.z @ state.z)
    rows = [
        TrajectoryRow(
            t=0,
            mse=_mse(model, state.theta),
            tau_hat=state.tau_hat,
            chosen_param=math.nan,
            chosen_denoiser="",
            se_prediction=se_prediction(z0, z0, model.m, model.delta, model.sigma),
        )
    ]
    frozen = {}
    frozen_family = None

    for t in range(1, iterations + 1):
        u = model.A.T @ state.z + state.theta
        if family is DenoiserFamily.HYBRID:
            candidates = [DenoiserFamily.ST, DenoiserFamily.EB]
            if frozen_family is not None:
                candidates = [frozen_family]
        else:
            candidates = [family]

        results = {}
        for member in candidates:
            if member in frozen:
                param = frozen[member]
                theta, z = _candidate(
                    model, state, u, member, param, options.zero_location
                )
                _check_finite(theta, z, t, member, param)
                results[member] = (float(z @ z), param, theta, z)
            else:
                grid = thresholds if member is DenoiserFamily.ST else weights
                results[member] = _search(
                    model, state, u, member, grid, options.zero_location
                )

        # ST first, so ties in residual favour soft-thresholding deterministically
        winner = min(candidates, key=lambda member: results[member][0])
        norm2, param, theta, z = results[winner]
        state = AmpState(
            theta=theta,
            z=z,
            tau_hat=float(np.sqrt(norm2 / model.m)),
            t=t,
            chosen_param=float(param),
            chosen_denoiser=winner,
        )

        if options.freeze and t >= options.freeze_after:
            for member in candidates:
                frozen.setdefault(member, results[member][1])
        if (
            family is DenoiserFamily.HYBRID
            and options.freeze
            and t >= options.hybrid_freeze_after
        ):
            frozen_family = winner

        norms = [results[member][0] for member in candidates]
        row = TrajectoryRow(
            t=t,
            mse=_mse(model, theta),
            tau_hat=state.tau_hat,
            chosen_param=state.chosen_param,
            chosen_denoiser=winner.value,
            se_prediction=se_prediction(
                norms[0], norms[-1], model.m, model.delta, model.sigma
            ),
        )
        rows.append(row)
        LOGGER.debug(
            "amp %s t=%d chose %s param=%g tau_hat^2=%.6g mse=%.6g",
            family.value,
            t,
            winner.value,
            param,
            state.tau_hat**2,
            row.mse,
        )
    return rows
