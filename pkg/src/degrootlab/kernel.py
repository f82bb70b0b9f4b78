"""Network formation from dimension choices via a squared-distance kernel.

Agents learning about nearby dimensions weight each other heavily: the raw
affinity is exp(-alpha (d_i - d_j)^2) and row-normalizing it yields the
update network. Histories of choices feed a discounted version of the same
construction. Best-response analysis asks which dimension choice minimizes
the sum of squared stationary influences of the induced network, and the
iterated dynamics replay that best response period after period.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import InconsistentObservationError, ScaleError
from .networks import (
    InfluenceVector,
    WeightMatrix,
    as_weight_matrix,
    stationary_distribution,
)

TIE_TOL = 1e-9
MATCH_TOL = 1e-6
ENUMERATION_CAP = 10_000_000

__all__ = [
    "ChoiceProfile",
    "MemoryProfile",
    "KernelParams",
    "BeliefState",
    "PeriodRecord",
    "kernel_scalar",
    "weights_from_choices",
    "memory_distance",
    "weights_from_memories",
    "profile_objective",
    "best_dimension",
    "consistent_memories",
    "run_iterative_dynamics",
]


@dataclass(frozen=True)
class ChoiceProfile:
    """One period of per-agent dimension choices (1-based labels)."""

    d: tuple[int, ...]

    def __post_init__(self):
        if len(self.d) < 1:
            raise ValueError("choice profile must be nonempty")
        clean = []
        for v in self.d:
            iv = int(v)
            if iv != v or iv < 1:
                raise ValueError("choices must be integers >= 1")
            clean.append(iv)
        object.__setattr__(self, "d", tuple(clean))

    @property
    def n(self) -> int:
        return len(self.d)


@dataclass(frozen=True)
class MemoryProfile:
    """Per-agent histories of dimension choices, equal length across agents."""

    histories: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.histories) < 1:
            raise ValueError("memory profile must cover at least one agent")
        t = len(self.histories[0])
        if t < 1:
            raise ValueError("histories must cover at least one period")
        clean = []
        for h in self.histories:
            if len(h) != t:
                raise ValueError("histories must share their length")
            clean.append(tuple(int(v) for v in h))
        object.__setattr__(self, "histories", tuple(clean))

    @property
    def n(self) -> int:
        return len(self.histories)

    @property
    def t(self) -> int:
        return len(self.histories[0])

    @classmethod
    def from_periods(cls, periods) -> "MemoryProfile":
        """Build from a sequence of per-period choice profiles."""
        rows = [tuple(getattr(p, "d", p)) for p in periods]
        return cls(histories=tuple(zip(*rows)))

    def last_choices(self) -> tuple[int, ...]:
        return tuple(h[-1] for h in self.histories)


@dataclass(frozen=True)
class KernelParams:
    """Kernel spread alpha (0 and inf allowed as limits) and memory discount gamma."""

    alpha: float
    gamma: float = 1.0

    def __post_init__(self):
        if not (self.alpha >= 0.0):
            raise ValueError("kernel spread must be nonnegative")
        if not (0.0 < self.gamma <= 1.0):
            raise ValueError("memory discount must lie in (0, 1]")


@dataclass(frozen=True)
class BeliefState:
    """Posterior over candidate memory profiles and the implied expectations.

    Attributes:
        candidates: memory profiles with positive posterior weight.
        weights: posterior probabilities, summing to 1.
        expected_choices: per-agent expectation of the next choice, equal
            under the martingale property to the posterior mean of the
            current one; entries lie in [1, m] and may be fractional.
    """

    candidates: tuple[MemoryProfile, ...]
    weights: np.ndarray
    expected_choices: np.ndarray


def _labels(d) -> np.ndarray:
    arr = np.asarray(getattr(d, "d", d), dtype=float)
    if arr.ndim != 1 or arr.size < 1:
        raise ValueError("choices must form a nonempty vector")
    if not np.isfinite(arr).all() or (arr < 1.0).any():
        raise ValueError("choice labels must be finite and >= 1")
    return arr


def kernel_scalar(d_i, d_j, alpha: float) -> float:
    """Affinity exp(-alpha (d_i - d_j)^2) between two dimension labels.

    Labels may be fractional (expected choices). alpha = inf degenerates
    to an indicator of equality; alpha = 0 makes every pair affinity 1.
    """
    if math.isinf(alpha):
        return 1.0 if d_i == d_j else 0.0
    return math.exp(-alpha * (float(d_i) - float(d_j)) ** 2)


def _kernel_matrix(labels: np.ndarray, alpha: float) -> np.ndarray:
    if math.isinf(alpha):
        return (labels[:, None] == labels[None, :]).astype(float)
    return np.exp(-alpha * (labels[:, None] - labels[None, :]) ** 2)


def weights_from_choices(d, alpha: float) -> WeightMatrix:
    """Row-normalized kernel network W_ij = K(d_i, d_j) / sum_k K(d_i, d_k).

    Accepts integer choice profiles or real-valued expected labels. All
    entries are strictly positive for finite alpha, so the result is
    always connected and aperiodic; alpha = inf yields a block-uniform
    matrix over groups of identical labels.
    """
    labels = _labels(d)
    if labels.size < 2:
        raise ValueError("need at least 2 agents to form a network")
    k = _kernel_matrix(labels, alpha)
    return WeightMatrix.from_array(k / k.sum(axis=1, keepdims=True))


def memory_distance(m_i, m_j, gamma: float) -> float:
    """Discounted squared distance between two choice histories.

    Period s of a length-t history carries weight gamma^(t - s), so the
    most recent period always counts with weight 1.
    """
    a = np.asarray(m_i, dtype=float)
    b = np.asarray(m_j, dtype=float)
    if a.shape != b.shape or a.ndim != 1 or a.size < 1:
        raise ValueError("histories must be equal-length nonempty vectors")
    t = a.size
    discounts = float(gamma) ** np.arange(t - 1, -1, -1)
    return float(np.sum(discounts * (a - b) ** 2))


def weights_from_memories(memories: MemoryProfile, params: KernelParams) -> WeightMatrix:
    """Row-normalized kernel on discounted history distances.

    With single-period histories this reduces exactly to
    ``weights_from_choices`` on the latest choices.
    """
    hist = np.asarray(memories.histories, dtype=float)
    t = hist.shape[1]
    discounts = params.gamma ** np.arange(t - 1, -1, -1)
    sq = (hist[:, None, :] - hist[None, :, :]) ** 2
    dist = (sq * discounts).sum(axis=2)
    if math.isinf(params.alpha):
        k = (dist == 0.0).astype(float)
    else:
        k = np.exp(-params.alpha * dist)
    return WeightMatrix.from_array(k / k.sum(axis=1, keepdims=True))


def profile_objective(d, alpha: float) -> float:
    """Sum of squared stationary influences of the induced network.

    Lower is better: the floor is 1/n, attained exactly when influence is
    uniform.
    """
    w = weights_from_choices(d, alpha)
    pi = stationary_distribution(w).pi
    return float(np.sum(pi ** 2))


def best_dimension(i: int, d_others, m: int, alpha: float, tie_rule: str = "lowest"):
    """Best-response dimension for agent i against fixed other choices.

    Inserts each candidate dimension 1..m at position i (0-based) of
    ``d_others`` (the other agents' labels, which may be fractional
    expectations) and evaluates the induced sum of squared influences.
    Objectives within 1e-9 of the minimum count as tied.

    Args:
        tie_rule: "lowest" returns the smallest tied dimension; "all"
            returns the full tied set as a tuple.
    """
    if m < 1:
        raise ValueError("need at least one dimension")
    others = list(np.asarray(getattr(d_others, "d", d_others), dtype=float))
    if not 0 <= i <= len(others):
        raise ValueError(f"agent index {i} out of range")
    objectives = []
    for dim in range(1, m + 1):
        candidate = others[:i] + [float(dim)] + others[i:]
        objectives.append(profile_objective(candidate, alpha))
    best = min(objectives)
    tied = tuple(
        dim for dim, obj in enumerate(objectives, start=1) if obj <= best + TIE_TOL
    )
    if tie_rule == "all":
        return tied
    if tie_rule == "lowest":
        return tied[0]
    raise ValueError(f"unknown tie rule {tie_rule!r}")


def consistent_memories(w_t, agent: int, own_history, m: int, params: KernelParams,
                        prior=None) -> BeliefState:
    """Posterior over memory profiles that reproduce an observed network.

    Holding agent ``agent``'s own history fixed, enumerates every
    candidate history for the other agents, keeps those whose induced
    network matches ``w_t`` entrywise within 1e-6, and weights the
    survivors by the prior (uniform when not given).

    Args:
        w_t: observed WeightMatrix (or raw array).
        agent: 0-based index of the observing agent.
        own_history: that agent's known choice history.
        m: number of dimensions.
        params: kernel parameters used to induce candidate networks.
        prior: optional callable MemoryProfile -> nonnegative weight.

    Raises:
        ScaleError: if the full candidate space m^(t*n) exceeds 1e7.
        InconsistentObservationError: if no candidate matches.
    """
    wm = as_weight_matrix(w_t)
    n = wm.n
    own = tuple(int(v) for v in own_history)
    t = len(own)
    if t < 1:
        raise ValueError("own history must cover at least one period")
    if not 0 <= agent < n:
        raise ValueError(f"agent index {agent} out of range")
    if m < 1:
        raise ValueError("need at least one dimension")
    if m ** (t * n) > ENUMERATION_CAP:
        raise ScaleError(
            f"candidate space m^(t*n) = {m}^{t * n} exceeds {ENUMERATION_CAP}"
        )

    histories_per_agent = list(itertools.product(range(1, m + 1), repeat=t))
    candidates: list[MemoryProfile] = []
    weights: list[float] = []
    for combo in itertools.product(histories_per_agent, repeat=n - 1):
        rows = list(combo[:agent]) + [own] + list(combo[agent:])
        profile = MemoryProfile(histories=tuple(rows))
        induced = weights_from_memories(profile, params).w
        if np.abs(induced - wm.w).max() <= MATCH_TOL:
            weight = float(prior(profile)) if prior is not None else 1.0
            if weight < 0.0:
                raise ValueError("prior weights must be nonnegative")
            if weight > 0.0:
                candidates.append(profile)
                weights.append(weight)
    if not candidates:
        raise InconsistentObservationError(
            "observed network is inconsistent with every candidate history"
        )
    w = np.asarray(weights, dtype=float)
    w = w / w.sum()
    expected = np.zeros(n)
    for profile, weight in zip(candidates, w):
        expected += weight * np.asarray(profile.last_choices(), dtype=float)
    return BeliefState(candidates=tuple(candidates), weights=w, expected_choices=expected)


@dataclass(frozen=True)
class PeriodRecord:
    """One period of the iterated dynamics."""

    period: int
    choices: ChoiceProfile
    weights: WeightMatrix
    influence: InfluenceVector

    @property
    def influence_concentration(self) -> float:
        """Sum of squared influences; 1/n means influence is spread evenly."""
        return float(np.sum(self.influence.pi ** 2))


def _resolve_tie(tied: tuple[int, ...], agent: int, tie_preferences) -> int:
    if tie_preferences and agent in tie_preferences:
        preferred = int(tie_preferences[agent])
        if preferred in tied:
            return preferred
    return tied[0]


def run_iterative_dynamics(n: int, m: int, periods: int, params: KernelParams,
                           initial=None, seed=None, tie_preferences=None,
                           expectations: str = "revealed") -> tuple[PeriodRecord, ...]:
    """Iterate choices -> network -> best-response choices.

    Period 1 plays the given initial profile (or a seeded uniform-random
    one). Each later period forms every agent's expectation of the
    others' next choices, equal under the martingale property to the
    expectation of their current ones, and all agents best-respond
    simultaneously; the realized profile then induces that period's
    network through the current-choice kernel.

    Args:
        initial: ChoiceProfile or sequence of labels in 1..m; drawn
            uniformly at random from the seed when omitted.
        tie_preferences: optional {agent index: preferred dimension},
            honored whenever the preference is among the tied best
            responses; remaining ties resolve to the lowest dimension.
        expectations: "revealed" takes the realized previous profile as
            the expectation (choices are observable); "posterior" averages
            over all current-choice profiles consistent with the observed
            network, which may produce fractional expected labels.

    Returns:
        One PeriodRecord per period.
    """
    if periods < 1:
        raise ValueError("need at least one period")
    if n < 2:
        raise ValueError("need at least 2 agents")
    if m < 1:
        raise ValueError("need at least one dimension")
    if expectations not in ("revealed", "posterior"):
        raise ValueError(f"unknown expectations mode {expectations!r}")

    if initial is None:
        rng = np.random.default_rng(seed)
        current = tuple(int(v) for v in rng.integers(1, m + 1, size=n))
    else:
        current = tuple(int(v) for v in getattr(initial, "d", initial))
        if len(current) != n:
            raise ValueError("initial profile length must equal the agent count")
        if any(not 1 <= v <= m for v in current):
            raise ValueError(f"initial choices must lie in 1..{m}")

    records = []
    for period in range(1, periods + 1):
        profile = ChoiceProfile(d=current)
        w = weights_from_choices(profile, params.alpha)
        pi = stationary_distribution(w)
        records.append(
            PeriodRecord(period=period, choices=profile, weights=w, influence=pi)
        )
        if period == periods:
            break

        if expectations == "revealed":
            expected = np.asarray(current, dtype=float)
            expected_per_agent = [expected] * n
        else:
            # The realized network reflects current choices only, so the
            # inversion treats it as a one-period memory.
            expected_per_agent = []
            for i in range(n):
                belief = consistent_memories(w, i, (current[i],), m, params)
                expected_per_agent.append(belief.expected_choices)

        nxt = []
        for i in range(n):
            exp_i = expected_per_agent[i]
            others = np.delete(exp_i, i)
            tied = best_dimension(i, others, m, params.alpha, tie_rule="all")
            nxt.append(_resolve_tie(tied, i, tie_preferences))
        current = tuple(nxt)
    return tuple(records)
