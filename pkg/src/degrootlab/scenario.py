"""Scenario configs: parse, validate, and execute experiment descriptions.

A scenario is a TOML file with a top-level ``mode`` plus mode-specific
sections. Every run produces a RunResult whose tables and matrices get
written under the resolved output directory.
"""
from __future__ import annotations

import os
from pathlib import Path

import numpy as np
import tomli

from .errors import ConfigError
from .kernel import (
    KernelParams,
    best_dimension,
    profile_objective,
    run_iterative_dynamics,
    weights_from_choices,
)
from .multidim import (
    MultiplexInfluence,
    PopulationMix,
    SignalModel,
    mixed_population_variance,
    multiplex_choice,
    optimal_specialist_share,
    sample_estimates,
)
from .networks import (
    WeightMatrix,
    build_complete_equal,
    build_complete_self_weight,
    build_core_periphery,
    build_star,
    degroot_consensus,
    stationary_distribution,
)
from .precision import (
    CostSpec,
    best_response_precision_check,
    consensus_variance,
    optimal_precision,
    planner_objective,
    social_precision,
)
from .results import RunResult, write_result
from .serialize import read_matrix

__all__ = [
    "MODES",
    "OUTPUT_DIR_ENV",
    "apply_override",
    "build_cost",
    "build_topology",
    "execute",
    "load_config",
    "resolve_output_dir",
    "run_scenario",
]

MODES = (
    "topology",
    "precision",
    "multiplex",
    "population",
    "kernel-static",
    "kernel-dynamic",
)
TOPOLOGY_KINDS = ("complete-equal", "complete-self-weight", "core-periphery", "star", "file")
OUTPUT_DIR_ENV = "DEGROOTLAB_OUTPUT_DIR"


# ---------------------------------------------------------------------------
# config access
# ---------------------------------------------------------------------------

def load_config(path) -> dict:
    """Parse a TOML scenario file into a plain dict."""
    try:
        with open(path, "rb") as fh:
            return tomli.load(fh)
    except tomli.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: not valid TOML: {exc}") from exc


def apply_override(cfg: dict, dotted: str, raw: str) -> None:
    """Set a dotted config key to a TOML-literal value, in place."""
    keys = dotted.split(".")
    if not all(keys):
        raise ConfigError(f"bad override key {dotted!r}")
    try:
        value = tomli.loads(f"v = {raw}")["v"]
    except tomli.TOMLDecodeError:
        value = raw
    node = cfg
    for key in keys[:-1]:
        node = node.setdefault(key, {})
        if not isinstance(node, dict):
            raise ConfigError(f"override {dotted!r} descends into a non-section value")
    node[keys[-1]] = value


def _require(table: dict, key: str, where: str = ""):
    label = f"{where}.{key}" if where else key
    if key not in table:
        raise ConfigError(f"missing required field {label}")
    return table[key]


def _as_int(value, label: str, minimum: int | None = None) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{label} must be an integer")
    if minimum is not None and value < minimum:
        raise ConfigError(f"{label} must be >= {minimum}")
    return value


def _as_float(value, label: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{label} must be a number")
    return float(value)


def _as_str(value, label: str, choices=None) -> str:
    if not isinstance(value, str):
        raise ConfigError(f"{label} must be a string")
    if choices is not None and value not in choices:
        raise ConfigError(f"{label} must be one of {', '.join(choices)}")
    return value


def _as_number_list(value, label: str) -> list[float]:
    if not isinstance(value, list) or not value:
        raise ConfigError(f"{label} must be a nonempty list of numbers")
    out = []
    for v in value:
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise ConfigError(f"{label} must contain only numbers")
        out.append(float(v))
    return out


def _as_int_list(value, label: str) -> list[int]:
    if not isinstance(value, list) or not value:
        raise ConfigError(f"{label} must be a nonempty list of integers")
    out = []
    for v in value:
        if isinstance(v, bool) or not isinstance(v, int):
            raise ConfigError(f"{label} must contain only integers")
        out.append(v)
    return out


def _as_table(value, label: str) -> dict:
    if not isinstance(value, dict):
        raise ConfigError(f"{label} must be a section")
    return value


# ---------------------------------------------------------------------------
# shared builders
# ---------------------------------------------------------------------------

def build_topology(table: dict, where: str = "topology") -> WeightMatrix:
    """Construct a weight matrix from a topology section."""
    table = _as_table(table, where)
    kind = _as_str(_require(table, "kind", where), f"{where}.kind", TOPOLOGY_KINDS)
    try:
        if kind == "complete-equal":
            return build_complete_equal(_as_int(_require(table, "n", where), f"{where}.n"))
        if kind == "complete-self-weight":
            x = _as_number_list(_require(table, "self_weights", where), f"{where}.self_weights")
            return build_complete_self_weight(np.array(x))
        if kind == "core-periphery":
            return build_core_periphery(_as_int(_require(table, "n", where), f"{where}.n"))
        if kind == "star":
            return build_star(_as_int(_require(table, "n", where), f"{where}.n"))
        path = _as_str(_require(table, "path", where), f"{where}.path")
        return read_matrix(path)
    except ValueError as exc:
        raise ConfigError(f"{where}: {exc}") from exc


def build_cost(table: dict, where: str = "cost") -> CostSpec:
    """Construct a cost specification from a cost section."""
    table = _as_table(table, where)
    kind = _as_str(
        _require(table, "kind", where), f"{where}.kind", ("linear", "power", "tabulated")
    )
    try:
        if kind == "linear":
            return CostSpec.linear(_as_float(_require(table, "kappa", where), f"{where}.kappa"))
        if kind == "power":
            return CostSpec.power(
                _as_float(_require(table, "a", where), f"{where}.a"),
                _as_float(_require(table, "p", where), f"{where}.p"),
            )
        return CostSpec.tabulated(
            _as_number_list(_require(table, "taus", where), f"{where}.taus"),
            _as_number_list(_require(table, "costs", where), f"{where}.costs"),
        )
    except ValueError as exc:
        raise ConfigError(f"{where}: {exc}") from exc


def _build_costs(cfg: dict, n: int):
    """One CostSpec, or a per-agent list when [[cost]] is an array."""
    value = _require(cfg, "cost")
    if isinstance(value, list):
        specs = [build_cost(t, f"cost[{k + 1}]") for k, t in enumerate(value)]
        if len(specs) != n:
            raise ConfigError(f"cost: need one entry per agent ({n}), got {len(specs)}")
        return specs
    return build_cost(value, "cost")


def _kernel_params(cfg: dict, need_gamma: bool) -> KernelParams:
    table = _as_table(_require(cfg, "kernel"), "kernel")
    alpha = _as_float(_require(table, "alpha", "kernel"), "kernel.alpha")
    gamma = 1.0
    if need_gamma or "gamma" in table:
        gamma = _as_float(table.get("gamma", 1.0), "kernel.gamma")
    try:
        return KernelParams(alpha=alpha, gamma=gamma)
    except ValueError as exc:
        raise ConfigError(f"kernel: {exc}") from exc


def _stream(seed, site: int):
    """Independent per-purpose random stream derived from the run seed."""
    if seed is None:
        return None
    return np.random.SeedSequence(entropy=seed, spawn_key=(site,))


_SITE_INITIAL = 0
_SITE_ESTIMATES = 1
_SITE_ASSIGNMENT = 2


# ---------------------------------------------------------------------------
# mode runners
# ---------------------------------------------------------------------------

def _run_topology(cfg: dict, name: str, seed) -> RunResult:
    w = build_topology(_require(cfg, "topology"))
    pi = stationary_distribution(w)
    rows = [{"agent": i + 1, "influence": p} for i, p in enumerate(pi.pi)]
    lines = [
        f"{w.n} agents, influence min {pi.pi.min():.6g} max {pi.pi.max():.6g}",
    ]
    if "opinions" in cfg:
        s = _as_number_list(cfg["opinions"], "opinions")
        if len(s) != w.n:
            raise ConfigError(f"opinions: need one value per agent ({w.n})")
        lines.append(f"consensus of given opinions = {degroot_consensus(w, s):.12g}")
    return RunResult(
        name=name, lines=tuple(lines), tables={"influence": rows}, matrices={"network": w}
    )


def _run_precision(cfg: dict, name: str, seed) -> RunResult:
    w = build_topology(_require(cfg, "topology"))
    pi = stationary_distribution(w)
    n = w.n
    costs = _build_costs(cfg, n)
    per_agent = costs if isinstance(costs, list) else [costs] * n

    tau_ind = np.array([optimal_precision(pi.pi[i], per_agent[i]) for i in range(n)])
    tau_soc = np.array([social_precision(pi.pi[i], per_agent[i], n) for i in range(n)])
    report = best_response_precision_check(pi, per_agent)

    rows = [
        {
            "agent": i + 1,
            "influence": pi.pi[i],
            "tau_individual": tau_ind[i],
            "tau_social": tau_soc[i],
        }
        for i in range(n)
    ]
    lines = (
        f"{n} agents; individual tau in [{tau_ind.min():.6g}, {tau_ind.max():.6g}]",
        f"consensus variance: individual {consensus_variance(pi, tau_ind):.6g}, "
        f"social {consensus_variance(pi, tau_soc):.6g}",
        f"planner objective: individual {planner_objective(pi, tau_ind, per_agent):.6g}, "
        f"social {planner_objective(pi, tau_soc, per_agent):.6g}",
        f"individual profile is deviation-proof: {report.is_equilibrium}",
    )
    return RunResult(
        name=name, lines=lines, tables={"precision": rows}, matrices={"network": w}
    )


def _run_multiplex(cfg: dict, name: str, seed) -> RunResult:
    layer_tables = _require(cfg, "layer")
    if not isinstance(layer_tables, list) or not layer_tables:
        raise ConfigError("layer: need at least one [[layer]] section")
    mats = [build_topology(t, f"layer[{j + 1}]") for j, t in enumerate(layer_tables)]
    n = mats[0].n
    if any(w.n != n for w in mats):
        raise ConfigError("layer: all layers must have the same number of agents")
    infl = MultiplexInfluence(
        tuple(stationary_distribution(w) for w in mats)
    )
    choices = tuple(multiplex_choice(infl, i) for i in range(n))

    influence_rows = [
        {"agent": i + 1, "layer": j + 1, "influence": infl.layers[j].pi[i]}
        for j in range(infl.m)
        for i in range(n)
    ]
    choice_rows = [{"agent": i + 1, "dimension": choices[i]} for i in range(n)]
    tables = {"influence": influence_rows, "choices": choice_rows}
    matrices = {f"layer_{j + 1}_network": w for j, w in enumerate(mats)}
    lines = [
        f"{n} agents over {infl.m} layers",
        "chosen dimensions: " + " ".join(str(v) for v in choices),
    ]

    if cfg.get("sample", False):
        tau_strong = _as_float(_require(cfg, "tau_strong"), "tau_strong")
        tau_weak = _as_float(_require(cfg, "tau_weak"), "tau_weak")
        theta = _as_number_list(cfg.get("theta", [0.0] * infl.m), "theta")
        if len(theta) != infl.m:
            raise ConfigError(f"theta: need one value per layer ({infl.m})")
        try:
            model = SignalModel(tau_strong=tau_strong, tau_weak=tau_weak, theta=theta)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        est = sample_estimates(model, choices, _stream(seed, _SITE_ESTIMATES))
        tables["consensus"] = [
            {
                "dimension": j + 1,
                "truth": theta[j],
                "consensus": float(infl.layers[j].pi @ est.e[:, j]),
            }
            for j in range(infl.m)
        ]
        tables["estimates"] = [
            {
                "agent": i + 1,
                "dimension": j + 1,
                "estimate": est.e[i, j],
            }
            for i in range(n)
            for j in range(infl.m)
        ]
        lines.append("sampled one estimate draw per agent and dimension")
    return RunResult(name=name, lines=tuple(lines), tables=tables, matrices=matrices)


def _run_population(cfg: dict, name: str, seed) -> RunResult:
    n = _as_int(_require(cfg, "n"), "n", minimum=1)
    m = _as_int(_require(cfg, "m"), "m", minimum=1)
    tau_strong = _as_float(_require(cfg, "tau_strong"), "tau_strong")
    tau_weak = _as_float(_require(cfg, "tau_weak"), "tau_weak")
    pi_i = _as_float(cfg.get("pi", 1.0 / n), "pi")
    alphas = cfg.get("alpha", [round(0.05 * k, 2) for k in range(21)])
    if isinstance(alphas, (int, float)) and not isinstance(alphas, bool):
        alphas = [float(alphas)]
    alphas = _as_number_list(alphas, "alpha")

    try:
        model = SignalModel(tau_strong=tau_strong, tau_weak=tau_weak, theta=np.zeros(m))
        share = optimal_specialist_share(m, tau_strong, tau_weak)
        rows = []
        for alpha in alphas:
            mix = PopulationMix(alpha=alpha, n=n, m=m)
            rows.append(
                {
                    "alpha": alpha,
                    "variance": mixed_population_variance(pi_i, mix, model, tau_strong),
                }
            )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc

    tables = {"variance": rows}
    lines = [
        f"population n={n}, m={m}, tau_i={tau_strong:g}, baseline {tau_weak:g}",
        f"affine slope coefficient g = {share.coefficient:.6g}",
        f"optimal specialist share alpha* = {share.alpha_star:g}"
        + (" (degenerate)" if share.degenerate else ""),
    ]

    assignment = cfg.get("assignment")
    if assignment is not None:
        assignment = _as_str(assignment, "assignment", ("random", "round-robin"))
        alpha_used = alphas[0] if len(alphas) == 1 else share.alpha_star
        try:
            spec_count, _ = PopulationMix(alpha=alpha_used, n=n, m=m).counts()
        except ValueError as exc:
            raise ConfigError(f"alpha: {exc}") from exc
        if assignment == "round-robin":
            dims = [(k % m) + 1 for k in range(spec_count)]
        else:
            rng = np.random.default_rng(_stream(seed, _SITE_ASSIGNMENT))
            dims = [int(v) for v in rng.integers(1, m + 1, size=spec_count)]
        tables["assignment"] = [
            {
                "agent": k + 1,
                "role": "specialist" if k < spec_count else "generalist",
                "dimension": dims[k] if k < spec_count else 0,
            }
            for k in range(n)
        ]
        lines.append(
            f"assigned {spec_count} specialists ({assignment}) at alpha={alpha_used:g}"
        )
    return RunResult(name=name, lines=tuple(lines), tables=tables)


def _run_kernel_static(cfg: dict, name: str, seed) -> RunResult:
    choices = _as_int_list(_require(cfg, "choices"), "choices")
    params = _kernel_params(cfg, need_gamma=False)
    m = _as_int(cfg.get("m", max(choices)), "m", minimum=1)
    if any(not 1 <= v <= m for v in choices):
        raise ConfigError(f"choices: values must lie in 1..{m}")
    try:
        w = weights_from_choices(choices, params.alpha)
    except ValueError as exc:
        raise ConfigError(f"choices: {exc}") from exc
    pi = stationary_distribution(w)

    rows = []
    for i, v in enumerate(choices):
        others = tuple(choices[:i] + choices[i + 1:])
        tied = best_dimension(i, others, m, params.alpha, tie_rule="all")
        rows.append(
            {
                "agent": i + 1,
                "dimension": v,
                "influence": pi.pi[i],
                "best_dimensions": "|".join(str(t) for t in tied),
                "is_best_response": v in tied,
            }
        )
    lines = (
        f"{len(choices)} agents, kernel alpha={params.alpha:g}",
        "choices: " + " ".join(str(v) for v in choices),
        f"influence concentration sum pi^2 = {profile_objective(choices, params.alpha):.6g}",
        f"profile is a best-response equilibrium: {all(r['is_best_response'] for r in rows)}",
    )
    return RunResult(
        name=name, lines=lines, tables={"profile": rows}, matrices={"network": w}
    )


def _run_kernel_dynamic(cfg: dict, name: str, seed) -> RunResult:
    n = _as_int(_require(cfg, "n"), "n", minimum=2)
    m = _as_int(_require(cfg, "m"), "m", minimum=1)
    periods = _as_int(_require(cfg, "periods"), "periods", minimum=1)
    params = _kernel_params(cfg, need_gamma=True)
    expectations = _as_str(
        cfg.get("expectations", "revealed"), "expectations", ("revealed", "posterior")
    )

    initial = None
    if "initial" in cfg:
        initial = _as_int_list(cfg["initial"], "initial")
        if len(initial) != n:
            raise ConfigError(f"initial: need one choice per agent ({n})")
        if any(not 1 <= v <= m for v in initial):
            raise ConfigError(f"initial: choices must lie in 1..{m}")

    tie_preferences = None
    if "ties" in cfg:
        ties_table = _as_table(cfg["ties"], "ties")
        tie_preferences = {}
        for key, value in ties_table.items():
            try:
                agent = int(key)
            except ValueError:
                raise ConfigError(f"ties: agent key {key!r} is not an integer") from None
            if not 1 <= agent <= n:
                raise ConfigError(f"ties: agent {agent} out of range 1..{n}")
            dim = _as_int(value, f"ties.{key}")
            if not 1 <= dim <= m:
                raise ConfigError(f"ties.{key}: dimension must lie in 1..{m}")
            tie_preferences[agent - 1] = dim

    records = run_iterative_dynamics(
        n,
        m,
        periods,
        params,
        initial=initial,
        seed=_stream(seed, _SITE_INITIAL),
        tie_preferences=tie_preferences,
        expectations=expectations,
    )
    rows = [
        {
            "period": rec.period,
            "choices": " ".join(str(v) for v in rec.choices.d),
            "influence": " ".join(f"{p:.12g}" for p in rec.influence.pi),
            "influence_concentration": rec.influence_concentration,
        }
        for rec in records
    ]
    matrices = {f"period_{rec.period}_network": rec.weights for rec in records}
    lines = (
        f"{n} agents, {m} dimensions, {periods} periods, alpha={params.alpha:g}, "
        f"gamma={params.gamma:g}, expectations={expectations}",
        "final choices: " + " ".join(str(v) for v in records[-1].choices.d),
        "final influence: " + " ".join(f"{p:.6g}" for p in records[-1].influence.pi),
    )
    return RunResult(name=name, lines=lines, tables={"trajectory": rows}, matrices=matrices)


_RUNNERS = {
    "topology": _run_topology,
    "precision": _run_precision,
    "multiplex": _run_multiplex,
    "population": _run_population,
    "kernel-static": _run_kernel_static,
    "kernel-dynamic": _run_kernel_dynamic,
}


# ---------------------------------------------------------------------------
# entry points
# ---------------------------------------------------------------------------

def execute(cfg: dict) -> RunResult:
    """Run a parsed scenario config and return its result."""
    mode = _as_str(_require(cfg, "mode"), "mode", MODES)
    name = cfg.get("name", mode)
    if not isinstance(name, str) or not name:
        raise ConfigError("name must be a nonempty string")
    seed = cfg.get("seed")
    if seed is not None:
        seed = _as_int(seed, "seed", minimum=0)
    return _RUNNERS[mode](cfg, name, seed)


def resolve_output_dir(cli_dir, cfg: dict) -> Path:
    """Pick the output directory: CLI flag, then env var, then config, then cwd."""
    if cli_dir:
        return Path(cli_dir)
    env = os.environ.get(OUTPUT_DIR_ENV)
    if env:
        return Path(env)
    out = cfg.get("output", {})
    if isinstance(out, dict) and out.get("dir"):
        return Path(_as_str(out["dir"], "output.dir"))
    return Path(".")


def run_scenario(config_path, output_dir=None, seed=None, overrides=()):
    """Load, run, and write out a scenario.

    ``overrides`` are (dotted_key, raw_value) pairs applied after the file
    is parsed; an explicit ``seed`` wins over the config's. Returns the
    RunResult and the list of written paths.
    """
    cfg = load_config(config_path)
    for dotted, raw in overrides:
        apply_override(cfg, dotted, raw)
    if seed is not None:
        cfg["seed"] = seed
    result = execute(cfg)
    paths = write_result(result, resolve_output_dir(output_dir, cfg))
    return result, paths
