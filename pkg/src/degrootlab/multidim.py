"""Learning a multi-dimensional state on one or several network layers.

Opinions are vectors and averaging runs independently per dimension, so the
consensus on each dimension is pi @ e[:, j]. On a multiplex structure (one
network layer per dimension) an agent's best dimension to learn about is the
one where its stationary influence is largest. The specialist/generalist
comparison asks how a population should split a precision budget: all on one
dimension, or evenly across all of them.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .networks import (
    InfluenceVector,
    as_weight_matrix,
    influence_array,
    stationary_distribution,
)

EXACT_PRECISION = 1e12  # precisions at or above this are treated as noiseless
SHARE_DEGENERATE_TOL = 1e-12

__all__ = [
    "StateEstimate",
    "SignalModel",
    "MultiplexInfluence",
    "PopulationMix",
    "SpecialistShareResult",
    "sample_estimates",
    "multidim_consensus",
    "multiplex_choice",
    "multiplex_choice_set",
    "choice_profile_variances",
    "mixed_population_variance",
    "optimal_specialist_share",
]


@dataclass(frozen=True)
class StateEstimate:
    """Per-agent estimate vectors, one row per agent, one column per dimension."""

    e: np.ndarray

    @property
    def n(self) -> int:
        return self.e.shape[0]

    @property
    def m(self) -> int:
        return self.e.shape[1]

    @classmethod
    def from_array(cls, e) -> "StateEstimate":
        e = np.array(e, dtype=float)
        if e.ndim != 2 or e.shape[1] < 1:
            raise ValueError("estimates must form an (n, m) array with m >= 1")
        if not np.isfinite(e).all():
            raise ValueError("estimates must be finite")
        e.setflags(write=False)
        return cls(e=e)


@dataclass(frozen=True)
class SignalModel:
    """Two-level signal noise around a true state vector.

    The chosen dimension is observed with precision ``tau_strong``, every
    other dimension with the weaker baseline ``tau_weak`` (signal standard
    deviation is the reciprocal precision). Precisions at or above 1e12
    count as noiseless.
    """

    tau_strong: float
    tau_weak: float
    theta: np.ndarray

    def __post_init__(self):
        if not 0.0 < self.tau_weak < self.tau_strong:
            raise ValueError("need 0 < tau_weak < tau_strong")
        theta = np.array(self.theta, dtype=float)
        if theta.ndim != 1 or theta.size < 1:
            raise ValueError("state vector must be one-dimensional and nonempty")
        if not np.isfinite(theta).all():
            raise ValueError("state vector must be finite")
        theta.setflags(write=False)
        object.__setattr__(self, "theta", theta)

    @property
    def m(self) -> int:
        return self.theta.shape[0]

    def noise_std(self, strong: bool) -> float:
        tau = self.tau_strong if strong else self.tau_weak
        return 0.0 if tau >= EXACT_PRECISION else 1.0 / tau


@dataclass(frozen=True)
class MultiplexInfluence:
    """One stationary influence vector per state dimension."""

    layers: tuple[InfluenceVector, ...]

    def __post_init__(self):
        if len(self.layers) < 1:
            raise ValueError("need at least one layer")
        n = self.layers[0].n
        if any(layer.n != n for layer in self.layers):
            raise ValueError("layers must share the agent count")

    @property
    def n(self) -> int:
        return self.layers[0].n

    @property
    def m(self) -> int:
        return len(self.layers)

    @classmethod
    def from_arrays(cls, arrays) -> "MultiplexInfluence":
        return cls(tuple(InfluenceVector.from_array(a) for a in arrays))


@dataclass(frozen=True)
class PopulationMix:
    """Specialist share alpha in a population of n agents and m dimensions."""

    alpha: float
    n: int
    m: int

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError("specialist share must lie in [0, 1]")
        if self.n < 1 or self.m < 1:
            raise ValueError("population needs n >= 1 and m >= 1")

    def counts(self) -> tuple[int, int]:
        """(specialists, generalists); requires alpha * n to be integral."""
        spec = self.alpha * self.n
        if abs(spec - round(spec)) > 1e-9:
            raise ValueError("alpha * n must be an integer to split the population")
        return int(round(spec)), self.n - int(round(spec))


def _choice_array(choices, m: int) -> np.ndarray:
    d = np.asarray(getattr(choices, "d", choices))
    if d.ndim != 1 or d.size < 1:
        raise ValueError("choices must form a nonempty vector")
    di = d.astype(int)
    if (di != d).any() or (di < 1).any() or (di > m).any():
        raise ValueError(f"choices must be integers in 1..{m}")
    return di


def sample_estimates(model: SignalModel, choices, seed) -> StateEstimate:
    """Draw per-agent estimates of the state.

    Agent i's entry on its chosen dimension gets noise at the strong
    precision, every other entry at the weak baseline. The draw is a pure
    function of the seed.
    """
    d = _choice_array(choices, model.m)
    n = d.size
    rng = np.random.default_rng(seed)
    std = np.full((n, model.m), model.noise_std(strong=False))
    std[np.arange(n), d - 1] = model.noise_std(strong=True)
    e = model.theta[None, :] + rng.standard_normal((n, model.m)) * std
    return StateEstimate.from_array(e)


def multidim_consensus(W, e) -> np.ndarray:
    """Per-dimension consensus: pi @ e, one value per state dimension."""
    wm = as_weight_matrix(W)
    est = e.e if isinstance(e, StateEstimate) else StateEstimate.from_array(e).e
    if est.shape[0] != wm.n:
        raise ValueError("estimate rows must match the agent count")
    pi = stationary_distribution(wm).pi
    return pi @ est


def multiplex_choice(influences: MultiplexInfluence, i: int) -> int:
    """Dimension (1-based) where agent i's influence is largest.

    Exact ties resolve to the lowest dimension index.
    """
    vals = np.array([layer.pi[i] for layer in influences.layers])
    return int(np.argmax(vals)) + 1


def multiplex_choice_set(influences: MultiplexInfluence, i: int) -> tuple[int, ...]:
    """All dimensions attaining agent i's maximal influence (exact ties)."""
    vals = np.array([layer.pi[i] for layer in influences.layers])
    top = vals.max()
    return tuple(int(j) + 1 for j in np.nonzero(vals == top)[0])


def choice_profile_variances(pi, model: SignalModel, choices) -> np.ndarray:
    """Per-dimension consensus variance implied by a choice profile.

    Dimension j's consensus variance is sum_i pi_i^2 var(s_ij), where the
    signal variance is the strong one exactly where agent i chose j.
    """
    p = influence_array(pi)
    d = _choice_array(choices, model.m)
    if p.shape[0] != d.size:
        raise ValueError("influence and choice lengths differ")
    var = np.full((d.size, model.m), model.noise_std(strong=False) ** 2)
    var[np.arange(d.size), d - 1] = model.noise_std(strong=True) ** 2
    return (p ** 2) @ var


def mixed_population_variance(pi_i: float, mix: PopulationMix, model: SignalModel,
                              tau_i: float) -> float:
    """Consensus variance on a chosen dimension under a specialist share.

    Of the alpha*n specialists, a 1/m share holds a strong signal (full
    budget tau_i) on this dimension and the rest contribute baseline noise;
    the (1-alpha)*n generalists each add tau_i/m to the baseline on every
    dimension.
    """
    if tau_i <= 0.0:
        raise ValueError("precision budget must be positive")
    a, n, m = mix.alpha, mix.n, mix.m
    tw = model.tau_weak
    strong = a * n / m / tau_i ** 2
    off_dimension = a * n * (m - 1) / m / tw ** 2
    generalist = (1.0 - a) * n / (tw + tau_i / m) ** 2
    return pi_i ** 2 * (strong + off_dimension + generalist)


@dataclass(frozen=True)
class SpecialistShareResult:
    """Boundary optimum of the specialist share."""

    alpha_star: float
    coefficient: float
    degenerate: bool


def optimal_specialist_share(m: int, tau_i: float, tau_weak: float) -> SpecialistShareResult:
    """Variance-minimizing share of specialists (always a boundary point).

    The population variance is affine in the share alpha with slope
    proportional to

        g = 1/(m tau_i^2) + (m-1)/(m tau_weak^2) - 1/(tau_weak + tau_i/m)^2.

    g > 0 means specialists raise variance, so alpha* = 0 (all
    generalists); g < 0 means alpha* = 1. |g| < 1e-12 is flagged
    degenerate (every share ties).
    """
    if m < 1:
        raise ValueError("need at least one dimension")
    if tau_i <= 0.0 or tau_weak <= 0.0:
        raise ValueError("precisions must be positive")
    g = (1.0 / (m * tau_i ** 2)
         + (m - 1.0) / (m * tau_weak ** 2)
         - 1.0 / (tau_weak + tau_i / m) ** 2)
    if abs(g) < SHARE_DEGENERATE_TOL:
        return SpecialistShareResult(alpha_star=0.0, coefficient=g, degenerate=True)
    return SpecialistShareResult(
        alpha_star=0.0 if g > 0.0 else 1.0, coefficient=g, degenerate=False
    )
