"""
Domain types for the sparse observation model ``y = theta + w``.

Defines the true sparse signal, its generating families, the noisy
observation under unit-variance Gaussian noise and the squared-error loss.
"""

import enum
import logging
from dataclasses import dataclass, field

import numpy as np
import traitlets as tl

from hybrid_shrinkage.exceptions import DimensionError, ParameterError
from hybrid_shrinkage.utils import NOISE_STREAM, SIGNAL_STREAM, make_rng, round_half_up

LOGGER = logging.getLogger(__name__)


class FamilyKind(enum.Enum):
    """Distribution of the nonzero entries of a signal."""

    HALF_PLUS_MINUS = "half"
    ALL_CONSTANT = "const"
    GAUSSIAN = "gauss"
    LAPLACE = "laplace"
    RADEMACHER = "rademacher"
    UNIFORM = "uniform"


@dataclass(frozen=True)
class SignalFamily:
    """
    The family the nonzero entries of a signal are drawn from.

    Use the named constructors rather than the raw fields, e.g.
    ``SignalFamily.half_plus_minus(3.0)`` or ``SignalFamily.laplace(2.0)``.
    """

    kind: FamilyKind
    value: float = 0.0
    variance: float = 0.0
    lo: float = 0.0
    hi: float = 0.0

    def __post_init__(self):
        if self.kind in (FamilyKind.HALF_PLUS_MINUS, FamilyKind.ALL_CONSTANT):
            if self.value == 0.0 or not np.isfinite(self.value):
                raise ParameterError(f"{self.kind.value}: value must be nonzero")
        if self.kind in (FamilyKind.GAUSSIAN, FamilyKind.LAPLACE):
            if not self.variance > 0.0 or not np.isfinite(self.variance):
                raise ParameterError(f"{self.kind.value}: variance must be > 0")
        if self.kind is FamilyKind.UNIFORM and not self.lo < self.hi:
            raise ParameterError(f"uniform: need lo < hi, got [{self.lo}, {self.hi}]")

    @classmethod
    def half_plus_minus(cls, value: float) -> "SignalFamily":
        """Half the nonzeros equal ``value``, the other half ``-value``."""
        return cls(FamilyKind.HALF_PLUS_MINUS, value=float(value))

    @classmethod
    def all_constant(cls, value: float) -> "SignalFamily":
        """All nonzeros equal ``value``."""
        return cls(FamilyKind.ALL_CONSTANT, value=float(value))

    @classmethod
    def gaussian(cls, variance: float) -> "SignalFamily":
        """Nonzeros drawn from N(0, variance)."""
        return cls(FamilyKind.GAUSSIAN, variance=float(variance))

    @classmethod
    def laplace(cls, variance: float) -> "SignalFamily":
        """Nonzeros drawn from a zero mean Laplace law with the given variance."""
        return cls(FamilyKind.LAPLACE, variance=float(variance))

    @classmethod
    def rademacher(cls) -> "SignalFamily":
        """Nonzeros equal to +1 or -1 with equal probability."""
        return cls(FamilyKind.RADEMACHER)

    @classmethod
    def uniform(cls, lo: float, hi: float) -> "SignalFamily":
        """Nonzeros drawn uniformly from ``[lo, hi]``."""
        return cls(FamilyKind.UNIFORM, lo=float(lo), hi=float(hi))

    @classmethod
    def parse(cls, text: str) -> "SignalFamily":
        """
        Parse a family label such as ``half:3`` or ``uniform:-1:1``.

        Parameters
        ----------
        text : str
            ``<kind>[:<param>[:<param>]]`` where kind is one of ``half``,
            ``const``, ``gauss``, ``laplace``, ``rademacher``, ``uniform``.

        Returns
        -------
        SignalFamily
            The parsed family.
        """
        name, *args = text.strip().split(":")
        try:
            kind = FamilyKind(name.lower())
            params = [float(a) for a in args]
        except ValueError as err:
            raise ParameterError(f"invalid signal family '{text}'") from err
        expected = {
            FamilyKind.RADEMACHER: 0,
            FamilyKind.UNIFORM: 2,
        }.get(kind, 1)
        if len(params) != expected:
            raise ParameterError(
                f"signal family '{name}' takes {expected} parameter(s), got '{text}'"
            )
        if kind is FamilyKind.HALF_PLUS_MINUS:
            return cls.half_plus_minus(*params)
        if kind is FamilyKind.ALL_CONSTANT:
            return cls.all_constant(*params)
        if kind is FamilyKind.GAUSSIAN:
            return cls.gaussian(*params)
        if kind is FamilyKind.LAPLACE:
            return cls.laplace(*params)
        if kind is FamilyKind.UNIFORM:
            return cls.uniform(*params)
        return cls.rademacher()

    @property
    def label(self) -> str:
        """The text form accepted by :meth:`parse`."""
        if self.kind in (FamilyKind.HALF_PLUS_MINUS, FamilyKind.ALL_CONSTANT):
            return f"{self.kind.value}:{self.value:g}"
        if self.kind in (FamilyKind.GAUSSIAN, FamilyKind.LAPLACE):
            return f"{self.kind.value}:{self.variance:g}"
        if self.kind is FamilyKind.UNIFORM:
            return f"{self.kind.value}:{self.lo:g}:{self.hi:g}"
        return self.kind.value

    def fourth_moment_bound(self) -> float:
        """
        Return the fourth-moment constant Lambda for this family.

        Returns
        -------
        float
            ``max(v**4, k * variance**2, hi**4 + lo**4) + 1`` where ``k`` is
            3 for Gaussian and 6 for Laplace nonzeros.
        """
        factor = 6.0 if self.kind is FamilyKind.LAPLACE else 3.0
        return (
            max(
                self.value**4,
                factor * self.variance**2,
                self.hi**4 + self.lo**4,
                1.0 if self.kind is FamilyKind.RADEMACHER else 0.0,
            )
            + 1.0
        )

    def draw(self, rng: np.random.Generator, k: int) -> np.ndarray:
        """Draw ``k`` nonzero values from the family."""
        if self.kind is FamilyKind.HALF_PLUS_MINUS:
            positive = (k + 1) // 2
            return np.concatenate(
                [np.full(positive, self.value), np.full(k - positive, -self.value)]
            )
        if self.kind is FamilyKind.ALL_CONSTANT:
            return np.full(k, self.value)
        if self.kind is FamilyKind.GAUSSIAN:
            return rng.normal(0.0, np.sqrt(self.variance), size=k)
        if self.kind is FamilyKind.LAPLACE:
            return rng.laplace(0.0, np.sqrt(self.variance / 2.0), size=k)
        if self.kind is FamilyKind.RADEMACHER:
            return rng.choice(np.array([-1.0, 1.0]), size=k)
        return rng.uniform(self.lo, self.hi, size=k)


class SignalSpec(tl.HasTraits):
    """Model describing how to generate a sparse signal."""

    n = tl.Int(1000)
    eta = tl.Float(0.1)
    family = tl.Instance(SignalFamily, allow_none=False)
    seed = tl.Int(0)

    @tl.default("family")
    def _default_family(self):
        return SignalFamily.half_plus_minus(3.0)

    @tl.validate("n")
    def _valid_n(self, proposal):
        if proposal["value"] < 1:
            raise ParameterError(f"n must be >= 1, got {proposal['value']}")
        return proposal["value"]

    @tl.validate("eta")
    def _valid_eta(self, proposal):
        if not 0.0 <= proposal["value"] <= 1.0:
            raise ParameterError(f"eta must be in [0, 1], got {proposal['value']}")
        return proposal["value"]

    @tl.validate("seed")
    def _valid_seed(self, proposal):
        if proposal["value"] < 0:
            raise ParameterError(f"seed must be non-negative, got {proposal['value']}")
        return proposal["value"]

    @property
    def k(self) -> int:
        """The number of nonzero entries, ``round(eta * n)`` ties upwards."""
        return round_half_up(self.eta * self.n)


def _readonly(values) -> np.ndarray:
    array = np.array(values, dtype=float)
    array.setflags(write=False)
    return array


@dataclass(frozen=True)
class Signal:
    """The true sparse vector together with its sparsity metadata."""

    values: np.ndarray
    eta: float
    family: SignalFamily = field(default_factory=SignalFamily.rademacher)

    def __post_init__(self):
        object.__setattr__(self, "values", _readonly(self.values))
        if self.values.ndim != 1 or self.values.size == 0:
            raise DimensionError("signal values must be a nonempty 1-d vector")
        k = np.count_nonzero(self.values)
        if not 0.0 <= self.eta <= 1.0 or k != round_half_up(self.eta * self.n):
            raise ParameterError(
                f"eta = {self.eta:g} does not match {k} nonzeros in n = {self.n}"
            )

    @classmethod
    def from_values(cls, values) -> "Signal":
        """Wrap an arbitrary vector, deriving ``eta`` from its nonzeros."""
        array = np.asarray(values, dtype=float)
        return cls(array, eta=np.count_nonzero(array) / max(array.size, 1))

    @property
    def n(self) -> int:
        """The dimension of the signal."""
        return self.values.size

    @property
    def support(self) -> np.ndarray:
        """Indices of the nonzero entries."""
        return np.flatnonzero(self.values)

    @property
    def fourth_moment(self) -> float:
        """The empirical fourth moment ``mean(theta**4)``."""
        return float(np.mean(self.values**4))


@dataclass(frozen=True)
class Observation:
    """A noisy observation ``y = theta + w`` with ``w ~ N(0, I)``."""

    y: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "y", _readonly(self.y))
        if self.y.ndim != 1 or self.y.size == 0:
            raise DimensionError("observation must be a nonempty 1-d vector")

    @property
    def n(self) -> int:
        """The dimension of the observation."""
        return self.y.size


def as_vector(values) -> np.ndarray:
    """Return the float vector held by an Observation, Signal or array."""
    if isinstance(values, Observation):
        return values.y
    if isinstance(values, Signal):
        return values.values
    return np.asarray(values, dtype=float)


def generate_signal(spec: SignalSpec) -> Signal:
    """
    Generate a sparse signal from a ``SignalSpec``.

    Parameters
    ----------
    spec : SignalSpec
        Dimension, sparsity level, nonzero family and seed.

    Returns
    -------
    Signal
        A signal with exactly ``spec.k`` nonzero entries placed on a
        support chosen uniformly without replacement. The result is a pure
        function of ``spec``.
    """
    rng = make_rng(spec.seed, SIGNAL_STREAM)
    values = np.zeros(spec.n)
    if spec.k > 0:
        support = rng.choice(spec.n, size=spec.k, replace=False)
        values[support] = spec.family.draw(rng, spec.k)
    LOGGER.debug(
        "generated signal n=%d k=%d family=%s", spec.n, spec.k, spec.family.label
    )
    return Signal(values, eta=spec.eta, family=spec.family)


def observe(signal: Signal, seed: int) -> Observation:
    """
    Add unit-variance Gaussian noise to a signal.

    Parameters
    ----------
    signal : Signal
        The true signal.
    seed : int
        Seed of the noise draw, bit-identical output for equal seeds.

    Returns
    -------
    Observation
        ``y = theta + w`` with ``w`` i.i.d. standard normal.
    """
    rng = make_rng(seed, NOISE_STREAM)
    return Observation(signal.values + rng.standard_normal(signal.n))


def squared_loss(theta, estimate) -> float:
    """
    Return the squared-error loss ``||estimate - theta||^2``.

    Parameters
    ----------
    theta : Signal or array_like
        The true signal.
    estimate : array_like
        The estimate, of the same length.

    Returns
    -------
    float
        The unnormalized loss; divide by ``n`` for the normalized loss.
    """
    truth = as_vector(theta)
    guess = as_vector(estimate)
    if truth.shape != guess.shape:
        raise DimensionError(
            f"loss needs equal lengths, got {truth.size} and {guess.size}"
        )
    return float(np.sum((guess - truth) ** 2))
