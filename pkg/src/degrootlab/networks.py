"""Row-stochastic update networks and their stationary influence.

Agents repeatedly replace their opinions with convex combinations of their
neighbors' opinions, the combination weights forming a row-stochastic matrix
W. When some power of W is entrywise positive, opinions converge to a common
consensus and the limit is governed by the left fixed point pi of W
(pi @ W = pi, sum(pi) = 1), which measures each agent's influence on the
outcome. This module builds the benchmark topologies, computes pi both
generically and in closed form, and runs the update dynamics.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SolverError

ROW_SUM_TOL = 1e-12
FIXED_POINT_TOL = 1e-10

__all__ = [
    "WeightMatrix",
    "InfluenceVector",
    "OpinionVector",
    "build_complete_equal",
    "build_complete_self_weight",
    "build_core_periphery",
    "build_star",
    "stationary_distribution",
    "stationary_complete_self_weight",
    "stationary_core_periphery",
    "stationary_star",
    "degroot_consensus",
    "degroot_iterate",
]


# ---------------------------------------------------------------------------
# domain types
# ---------------------------------------------------------------------------

def _positive_power_exists(w: np.ndarray) -> bool:
    # Squares the positivity pattern until the exponent reaches n^2. A
    # primitive matrix turns positive at exponent <= (n-1)^2 + 1 and stays
    # positive afterwards (no zero rows by row-stochasticity, no zero
    # columns once primitive), so checking powers of two suffices.
    n = w.shape[0]
    b = w > 0.0
    k = 1
    while True:
        if b.all():
            return True
        if k >= n * n:
            return False
        b = (b.astype(np.float64) @ b.astype(np.float64)) > 0.0
        k *= 2


@dataclass(frozen=True)
class WeightMatrix:
    """Row-stochastic update-weight matrix.

    Parameters
    ----------
    w : ndarray, shape (n, n)
        Entry (i, j) is the weight agent i places on agent j's opinion.
    strongly_connected_aperiodic : bool
        True when some power of ``w`` is entrywise positive, which
        guarantees a unique stationary distribution.
    """

    w: np.ndarray
    strongly_connected_aperiodic: bool

    @property
    def n(self) -> int:
        return self.w.shape[0]

    @classmethod
    def from_array(cls, w) -> "WeightMatrix":
        """Validate an array and wrap it.

        Raises
        ------
        ValueError
            If the array is not square with n >= 2, has negative or
            non-finite entries, or a row sum deviates from 1 by more
            than 1e-12.
        """
        w = np.array(w, dtype=float)
        if w.ndim != 2 or w.shape[0] != w.shape[1]:
            raise ValueError("weight matrix must be square")
        if w.shape[0] < 2:
            raise ValueError("weight matrix needs at least 2 agents")
        if not np.isfinite(w).all():
            raise ValueError("weight matrix entries must be finite")
        if (w < 0.0).any():
            raise ValueError("weight matrix entries must be nonnegative")
        row_gap = np.abs(w.sum(axis=1) - 1.0).max()
        if row_gap > ROW_SUM_TOL:
            raise ValueError(
                f"weight matrix rows must sum to 1 (max deviation {row_gap:.3e})"
            )
        w.setflags(write=False)
        return cls(w=w, strongly_connected_aperiodic=_positive_power_exists(w))


@dataclass(frozen=True)
class InfluenceVector:
    """Stationary distribution pi over agents (sums to 1)."""

    pi: np.ndarray

    @property
    def n(self) -> int:
        return self.pi.shape[0]

    @classmethod
    def from_array(cls, pi) -> "InfluenceVector":
        pi = np.array(pi, dtype=float)
        if pi.ndim != 1 or pi.size < 1:
            raise ValueError("influence vector must be one-dimensional")
        if not np.isfinite(pi).all():
            raise ValueError("influence entries must be finite")
        if (pi < 0.0).any():
            raise ValueError("influence entries must be nonnegative")
        gap = abs(pi.sum() - 1.0)
        if gap > ROW_SUM_TOL:
            raise ValueError(f"influence entries must sum to 1 (off by {gap:.3e})")
        pi.setflags(write=False)
        return cls(pi=pi)


@dataclass(frozen=True)
class OpinionVector:
    """Per-agent scalar opinions (or signal realizations)."""

    s: np.ndarray

    @property
    def n(self) -> int:
        return self.s.shape[0]

    @classmethod
    def from_array(cls, s) -> "OpinionVector":
        s = np.array(s, dtype=float)
        if s.ndim != 1:
            raise ValueError("opinion vector must be one-dimensional")
        if not np.isfinite(s).all():
            raise ValueError("opinions must be finite")
        s.setflags(write=False)
        return cls(s=s)


def as_weight_matrix(W) -> WeightMatrix:
    """Coerce a WeightMatrix or raw array to a validated WeightMatrix."""
    return W if isinstance(W, WeightMatrix) else WeightMatrix.from_array(W)


def _opinion_array(s, n: int) -> np.ndarray:
    arr = np.asarray(s.s if isinstance(s, OpinionVector) else s, dtype=float)
    if arr.shape != (n,):
        raise ValueError(f"expected {n} opinions, got shape {arr.shape}")
    if not np.isfinite(arr).all():
        raise ValueError("opinions must be finite")
    return arr


def influence_array(pi) -> np.ndarray:
    """Coerce an InfluenceVector or raw array to a plain array."""
    return np.asarray(pi.pi if isinstance(pi, InfluenceVector) else pi, dtype=float)


# ---------------------------------------------------------------------------
# builders
# ---------------------------------------------------------------------------

def build_complete_equal(n: int) -> WeightMatrix:
    """Fully connected network with equal weight 1/n everywhere.

    Parameters
    ----------
    n : int
        Agent count, at least 2.
    """
    if n < 2:
        raise ValueError("complete network needs n >= 2")
    return WeightMatrix.from_array(np.full((n, n), 1.0 / n))


def build_complete_self_weight(x) -> WeightMatrix:
    """Complete network parameterized by self-weights.

    Row i places ``x[i]`` on agent i itself and spreads the remainder
    evenly, (1 - x[i]) / (n - 1), over the other agents.

    Parameters
    ----------
    x : array-like, shape (n,)
        Self-weights, each strictly inside (0, 1). A self-weight of 1
        would disconnect the agent.
    """
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.size < 2:
        raise ValueError("need at least 2 self-weights")
    if not ((x > 0.0) & (x < 1.0)).all():
        raise ValueError("self-weights must lie strictly inside (0, 1)")
    n = x.size
    w = np.repeat(((1.0 - x) / (n - 1))[:, None], n, axis=1)
    w[np.arange(n), np.arange(n)] = x
    return WeightMatrix.from_array(w)


def build_core_periphery(n: int) -> WeightMatrix:
    """Ring of n-1 periphery agents around a single core agent.

    Each periphery agent splits weight 1/4 over itself, its two ring
    neighbors, and the core; the core (agent with index n-1) weighs
    every agent, itself included, at 1/n.

    Parameters
    ----------
    n : int
        Agent count, at least 5 so every ring member has two distinct
        neighbors.
    """
    if n < 5:
        raise ValueError("core-periphery needs n >= 5 for a ring with distinct neighbors")
    w = np.zeros((n, n))
    ring = n - 1
    for i in range(ring):
        w[i, i] = 0.25
        w[i, (i - 1) % ring] = 0.25
        w[i, (i + 1) % ring] = 0.25
        w[i, n - 1] = 0.25
    w[n - 1, :] = 1.0 / n
    return WeightMatrix.from_array(w)


def build_star(n: int) -> WeightMatrix:
    """Star network: leaves listen to themselves and the center only.

    Leaf rows put 1/2 on themselves and 1/2 on the center (index n-1);
    the center weighs everyone at 1/n.

    Parameters
    ----------
    n : int
        Agent count, at least 3.
    """
    if n < 3:
        raise ValueError("star needs n >= 3")
    w = np.zeros((n, n))
    leaves = np.arange(n - 1)
    w[leaves, leaves] = 0.5
    w[leaves, n - 1] = 0.5
    w[n - 1, :] = 1.0 / n
    return WeightMatrix.from_array(w)


# ---------------------------------------------------------------------------
# stationary distributions
# ---------------------------------------------------------------------------

def _power_iteration(w: np.ndarray, max_iter: int = 100_000, tol: float = 1e-15) -> np.ndarray:
    n = w.shape[0]
    pi = np.full(n, 1.0 / n)
    for _ in range(max_iter):
        nxt = pi @ w
        if np.abs(nxt - pi).max() < tol:
            return nxt
        pi = nxt
    return pi


def stationary_distribution(W) -> InfluenceVector:
    """Unique left fixed point of a connected aperiodic weight matrix.

    Solves the linear system (W^T - I) pi = 0 with one equation replaced
    by the normalization sum(pi) = 1 by dense elimination, falling back
    to power iteration when elimination is numerically singular or
    produces a non-positive vector.

    Returns
    -------
    InfluenceVector
        pi with pi @ W = pi, sum(pi) = 1, residual below 1e-10.

    Raises
    ------
    SolverError
        If the matrix is not flagged strongly connected and aperiodic,
        or the fixed-point residual cannot be brought below tolerance.
    """
    wm = as_weight_matrix(W)
    if not wm.strongly_connected_aperiodic:
        raise SolverError(
            "no unique stationary distribution: "
            "matrix is not strongly connected and aperiodic"
        )
    w = wm.w
    n = wm.n
    a = w.T - np.eye(n)
    a[-1, :] = 1.0  # replace one redundant equation with sum(pi) = 1
    b = np.zeros(n)
    b[-1] = 1.0
    try:
        pi = np.linalg.solve(a, b)
    except np.linalg.LinAlgError:
        pi = _power_iteration(w)
    if not np.isfinite(pi).all() or (pi <= 0.0).any():
        pi = _power_iteration(w)
    pi = pi / pi.sum()
    residual = np.abs(pi @ w - pi).max()
    if residual > FIXED_POINT_TOL:
        raise SolverError(
            f"stationary fixed-point residual {residual:.3e} exceeds {FIXED_POINT_TOL:.0e}"
        )
    return InfluenceVector.from_array(pi)


def stationary_complete_self_weight(x) -> InfluenceVector:
    """Closed-form influence for the self-weight complete network.

    pi_j is proportional to 1 / (1 - x_j): agents who discount their
    neighbors more retain more influence over the consensus.
    """
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.size < 2:
        raise ValueError("need at least 2 self-weights")
    if not ((x > 0.0) & (x < 1.0)).all():
        raise ValueError("self-weights must lie strictly inside (0, 1)")
    r = 1.0 / (1.0 - x)
    return InfluenceVector.from_array(r / r.sum())


def stationary_core_periphery(n: int) -> InfluenceVector:
    """Closed-form influence for the core-periphery network.

    Periphery agents each hold 4 / (5n - 4); the core holds n / (5n - 4),
    a factor n/4 more.
    """
    if n < 5:
        raise ValueError("core-periphery needs n >= 5 for a ring with distinct neighbors")
    pi = np.full(n, 4.0 / (5.0 * n - 4.0))
    pi[-1] = n / (5.0 * n - 4.0)
    return InfluenceVector.from_array(pi)


def stationary_star(n: int) -> InfluenceVector:
    """Closed-form influence for the star: leaves 2/(3n-2), center n/(3n-2)."""
    if n < 3:
        raise ValueError("star needs n >= 3")
    pi = np.full(n, 2.0 / (3.0 * n - 2.0))
    pi[-1] = n / (3.0 * n - 2.0)
    return InfluenceVector.from_array(pi)


# ---------------------------------------------------------------------------
# dynamics
# ---------------------------------------------------------------------------

def degroot_consensus(W, s) -> float:
    """Limit opinion under repeated averaging: pi @ s.

    Every entry of W^k s converges to this value as k grows.
    """
    wm = as_weight_matrix(W)
    opinions = _opinion_array(s, wm.n)
    pi = stationary_distribution(wm).pi
    return float(pi @ opinions)


def degroot_iterate(W, s, steps: int) -> OpinionVector:
    """Apply ``steps`` rounds of averaging, returning W^steps @ s."""
    if steps < 0:
        raise ValueError("steps must be nonnegative")
    wm = as_weight_matrix(W)
    v = _opinion_array(s, wm.n)
    for _ in range(steps):
        v = wm.w @ v
    return OpinionVector.from_array(v)
