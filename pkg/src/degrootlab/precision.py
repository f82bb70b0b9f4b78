"""Costly signal-precision choice against a fixed influence distribution.

Each agent observes an unbiased signal with standard deviation 1/tau and the
consensus estimate inherits variance sum(pi_k^2 / tau_k^2). An agent trades
that variance off against a strictly increasing cost of precision, giving
the first-order condition tau^3 c'(tau) = 2 pi_i^2. A planner who counts the
variance once per agent faces the same condition with the right-hand side
scaled by n, so under linear costs the planner's precision exceeds the
individual choice by exactly n^(1/3).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy.interpolate import PchipInterpolator
from scipy.optimize import brentq

from .errors import SolverError
from .networks import influence_array

FOC_TOL = 1e-10
BRACKET = (1e-12, 1e12)
DEVIATION_GRID = np.logspace(-3.0, 3.0, 200)
IMPROVEMENT_TOL = 1e-8

__all__ = [
    "CostSpec",
    "PrecisionProfile",
    "DeviationReport",
    "consensus_variance",
    "optimal_precision",
    "social_precision",
    "agent_objective",
    "planner_objective",
    "best_response_precision_check",
]


@dataclass(frozen=True)
class CostSpec:
    """Strictly increasing precision cost c(tau) with evaluable derivative.

    Kinds:
        linear:    c(tau) = kappa * tau
        power:     c(tau) = a * tau**p, p >= 1
        tabulated: monotone piecewise-cubic interpolation through sample
                   points anchored at c(0) = 0, extended linearly past
                   the last knot
    """

    kind: str
    params: tuple[float, ...] = ()
    table: tuple[tuple[float, float], ...] = field(default=(), repr=False)

    @classmethod
    def linear(cls, kappa: float) -> "CostSpec":
        if not kappa > 0.0:
            raise ValueError("linear cost needs kappa > 0")
        return cls(kind="linear", params=(float(kappa),))

    @classmethod
    def power(cls, a: float, p: float) -> "CostSpec":
        if not a > 0.0:
            raise ValueError("power cost needs a > 0")
        if not p >= 1.0:
            raise ValueError("power cost needs exponent p >= 1")
        return cls(kind="power", params=(float(a), float(p)))

    @classmethod
    def tabulated(cls, taus, costs) -> "CostSpec":
        taus = np.asarray(taus, dtype=float)
        costs = np.asarray(costs, dtype=float)
        if taus.shape != costs.shape or taus.ndim != 1 or taus.size < 2:
            raise ValueError("tabulated cost needs matching tau and cost samples")
        if taus[0] != 0.0 or costs[0] != 0.0:
            raise ValueError("tabulated cost must start at (0, 0)")
        if (np.diff(taus) <= 0.0).any() or (np.diff(costs) <= 0.0).any():
            raise ValueError("tabulated cost samples must be strictly increasing")
        spec = cls(kind="tabulated", table=tuple(zip(taus.tolist(), costs.tolist())))
        # strict increase between knots, checked on a dense grid
        grid = np.linspace(taus[0], taus[-1], 512)[1:]
        if (spec.marginal(grid) <= 0.0).any():
            raise ValueError("tabulated cost interpolant is not strictly increasing")
        return spec

    @cached_property
    def _interp(self) -> PchipInterpolator:
        pts = np.asarray(self.table, dtype=float)
        return PchipInterpolator(pts[:, 0], pts[:, 1])

    def cost(self, tau):
        """Evaluate c(tau); accepts scalars or arrays."""
        tau = np.asarray(tau, dtype=float)
        if self.kind == "linear":
            out = self.params[0] * tau
        elif self.kind == "power":
            a, p = self.params
            out = a * tau ** p
        elif self.kind == "tabulated":
            hi = self.table[-1][0]
            inside = np.minimum(tau, hi)
            out = self._interp(inside)
            slope = float(self._interp.derivative()(hi))
            out = out + np.where(tau > hi, (tau - hi) * slope, 0.0)
        else:
            raise ValueError(f"unknown cost kind {self.kind!r}")
        return out if out.ndim else float(out)

    def marginal(self, tau):
        """Evaluate c'(tau); accepts scalars or arrays."""
        tau = np.asarray(tau, dtype=float)
        if self.kind == "linear":
            out = np.full_like(tau, self.params[0])
        elif self.kind == "power":
            a, p = self.params
            out = a * p * tau ** (p - 1.0)
        elif self.kind == "tabulated":
            hi = self.table[-1][0]
            deriv = self._interp.derivative()
            out = np.where(tau > hi, float(deriv(hi)), deriv(np.minimum(tau, hi)))
        else:
            raise ValueError(f"unknown cost kind {self.kind!r}")
        return out if out.ndim else float(out)


@dataclass(frozen=True)
class PrecisionProfile:
    """Per-agent positive precision levels."""

    tau: np.ndarray

    @property
    def n(self) -> int:
        return self.tau.shape[0]

    @classmethod
    def from_array(cls, tau) -> "PrecisionProfile":
        tau = np.array(tau, dtype=float)
        if tau.ndim != 1 or tau.size < 1:
            raise ValueError("precision profile must be one-dimensional")
        if not np.isfinite(tau).all() or (tau <= 0.0).any():
            raise ValueError("precisions must be positive and finite")
        tau.setflags(write=False)
        return cls(tau=tau)


def _precision_array(tau) -> np.ndarray:
    arr = np.asarray(tau.tau if isinstance(tau, PrecisionProfile) else tau, dtype=float)
    if arr.ndim != 1:
        raise ValueError("precision profile must be one-dimensional")
    if not np.isfinite(arr).all() or (arr <= 0.0).any():
        raise ValueError("precisions must be positive and finite")
    return arr


def consensus_variance(pi, tau) -> float:
    """Variance of the consensus estimate: sum(pi_k^2 / tau_k^2)."""
    p = influence_array(pi)
    t = _precision_array(tau)
    if p.shape != t.shape:
        raise ValueError("influence and precision lengths differ")
    return float(np.sum(p ** 2 / t ** 2))


def _solve_foc(rhs: float, cost: CostSpec) -> float:
    # Root of g(tau) = tau^3 c'(tau) - rhs. Linear and power costs solve in
    # closed form; otherwise bracketed root finding, then a residual check
    # on every path.
    if cost.kind == "linear":
        tau = (rhs / cost.params[0]) ** (1.0 / 3.0)
    elif cost.kind == "power":
        a, p = cost.params
        tau = (rhs / (a * p)) ** (1.0 / (p + 2.0))
    else:
        def g(t: float) -> float:
            return t ** 3 * float(cost.marginal(t)) - rhs

        lo, hi = BRACKET
        try:
            tau = brentq(g, lo, hi, maxiter=200, xtol=1e-15, rtol=8.9e-16)
        except ValueError as exc:
            raise SolverError(
                f"first-order condition root not bracketed in [{lo:g}, {hi:g}]"
            ) from exc
    residual = abs(tau ** 3 * float(cost.marginal(tau)) - rhs)
    if residual > FOC_TOL:
        raise SolverError(
            f"first-order condition residual {residual:.3e} exceeds {FOC_TOL:.0e}"
        )
    return float(tau)


def optimal_precision(pi_i: float, cost: CostSpec) -> float:
    """Individually optimal precision: the root of tau^3 c'(tau) = 2 pi_i^2.

    Parameters
    ----------
    pi_i : float
        The agent's stationary influence, in (0, 1]. Zero influence is
        rejected: with a strictly increasing cost the optimum degenerates
        to tau -> 0.
    cost : CostSpec
    """
    if not 0.0 < pi_i <= 1.0:
        raise ValueError("influence must lie in (0, 1]")
    return _solve_foc(2.0 * pi_i ** 2, cost)


def social_precision(pi_i: float, cost: CostSpec, n: int) -> float:
    """Planner's precision for one agent: root of tau^3 c'(tau) = 2 n pi_i^2.

    The planner counts the consensus variance once per agent, scaling the
    marginal benefit of precision by n. Under linear cost the result is
    exactly n^(1/3) times the individual optimum.
    """
    if not 0.0 < pi_i <= 1.0:
        raise ValueError("influence must lie in (0, 1]")
    if n < 1:
        raise ValueError("agent count must be at least 1")
    return _solve_foc(2.0 * n * pi_i ** 2, cost)


def agent_objective(pi, tau, i: int, cost: CostSpec) -> float:
    """Agent i's loss: consensus variance plus own precision cost.

    ``i`` indexes agents from 0.
    """
    t = _precision_array(tau)
    if not 0 <= i < t.shape[0]:
        raise ValueError(f"agent index {i} out of range")
    return consensus_variance(pi, t) + float(cost.cost(t[i]))


def planner_objective(pi, tau, costs) -> float:
    """Planner's loss: n times the consensus variance plus all agent costs.

    ``costs`` is one CostSpec per agent, or a single CostSpec applied to
    every agent.
    """
    p = influence_array(pi)
    t = _precision_array(tau)
    n = t.shape[0]
    if isinstance(costs, CostSpec):
        costs = [costs] * n
    if len(costs) != n:
        raise ValueError("need one cost per agent")
    total_cost = sum(float(c.cost(ti)) for c, ti in zip(costs, t))
    return n * consensus_variance(p, t) + total_cost


@dataclass(frozen=True)
class DeviationReport:
    """Outcome of a grid search for profitable unilateral deviations."""

    tau: np.ndarray
    best_gain: np.ndarray
    best_deviation: np.ndarray
    violations: tuple[int, ...]

    @property
    def is_equilibrium(self) -> bool:
        return not self.violations


def best_response_precision_check(pi, costs, tau=None) -> DeviationReport:
    """Scan a precision profile for profitable unilateral deviations.

    Each agent tries every alternative precision on a 200-point log grid
    over [1e-3, 1e3], holding the others fixed. A gain in the agent's own
    objective above 1e-8 counts as a violation. By default the profile
    checked is the individually optimal one, which should come back clean.

    Parameters
    ----------
    pi : InfluenceVector or array-like
    costs : CostSpec or sequence of CostSpec, one per agent
    tau : optional profile to check instead of the individual optimum.
    """
    p = influence_array(pi)
    n = p.shape[0]
    if isinstance(costs, CostSpec):
        costs = [costs] * n
    if len(costs) != n:
        raise ValueError("need one cost per agent")
    if tau is None:
        t = np.array([optimal_precision(p[i], costs[i]) for i in range(n)])
    else:
        t = _precision_array(tau)
        if t.shape != p.shape:
            raise ValueError("influence and precision lengths differ")

    gains = np.zeros(n)
    best_dev = t.copy()
    for i in range(n):
        rest = float(np.sum(np.delete(p, i) ** 2 / np.delete(t, i) ** 2))
        base = rest + p[i] ** 2 / t[i] ** 2 + float(costs[i].cost(t[i]))
        objs = rest + p[i] ** 2 / DEVIATION_GRID ** 2 + costs[i].cost(DEVIATION_GRID)
        k = int(np.argmin(objs))
        gains[i] = base - objs[k]
        if gains[i] > IMPROVEMENT_TOL:
            best_dev[i] = DEVIATION_GRID[k]
    violations = tuple(int(i) for i in np.nonzero(gains > IMPROVEMENT_TOL)[0])
    return DeviationReport(
        tau=t, best_gain=gains, best_deviation=best_dev, violations=violations
    )
