"""Social learning by repeated averaging, with chosen precision and
similarity-kernel network formation.

The package splits into five layers: row-stochastic networks and their
stationary influence (networks), precision choice against a cost
(precision), multidimensional states and specialist populations
(multidim), kernel-based network formation and its dynamics (kernel),
and scenario plumbing (scenario, recipes, cli).
"""
from .errors import ConfigError, InconsistentObservationError, ScaleError, SolverError
from .kernel import (
    BeliefState,
    ChoiceProfile,
    KernelParams,
    MemoryProfile,
    PeriodRecord,
    best_dimension,
    consistent_memories,
    kernel_scalar,
    memory_distance,
    profile_objective,
    run_iterative_dynamics,
    weights_from_choices,
    weights_from_memories,
)
from .multidim import (
    MultiplexInfluence,
    PopulationMix,
    SignalModel,
    SpecialistShareResult,
    StateEstimate,
    choice_profile_variances,
    mixed_population_variance,
    multidim_consensus,
    multiplex_choice,
    multiplex_choice_set,
    optimal_specialist_share,
    sample_estimates,
)
from .networks import (
    InfluenceVector,
    OpinionVector,
    WeightMatrix,
    build_complete_equal,
    build_complete_self_weight,
    build_core_periphery,
    build_star,
    degroot_consensus,
    degroot_iterate,
    stationary_complete_self_weight,
    stationary_core_periphery,
    stationary_distribution,
    stationary_star,
)
from .precision import (
    CostSpec,
    DeviationReport,
    PrecisionProfile,
    agent_objective,
    best_response_precision_check,
    consensus_variance,
    optimal_precision,
    planner_objective,
    social_precision,
)
from .recipes import list_recipes, run_recipe
from .results import RunResult, write_result
from .scenario import run_scenario
from .serialize import emit_matrix, emit_table, format_number, read_matrix

__version__ = "0.1.0"

__all__ = [
    "BeliefState",
    "ChoiceProfile",
    "ConfigError",
    "CostSpec",
    "DeviationReport",
    "InconsistentObservationError",
    "InfluenceVector",
    "KernelParams",
    "MemoryProfile",
    "MultiplexInfluence",
    "OpinionVector",
    "PeriodRecord",
    "PopulationMix",
    "PrecisionProfile",
    "RunResult",
    "ScaleError",
    "SignalModel",
    "SolverError",
    "SpecialistShareResult",
    "StateEstimate",
    "WeightMatrix",
    "agent_objective",
    "best_dimension",
    "best_response_precision_check",
    "choice_profile_variances",
    "consensus_variance",
    "consistent_memories",
    "degroot_consensus",
    "degroot_iterate",
    "emit_matrix",
    "emit_table",
    "format_number",
    "kernel_scalar",
    "list_recipes",
    "memory_distance",
    "read_matrix",
    "mixed_population_variance",
    "multidim_consensus",
    "multiplex_choice",
    "multiplex_choice_set",
    "optimal_precision",
    "optimal_specialist_share",
    "planner_objective",
    "profile_objective",
    "run_iterative_dynamics",
    "run_recipe",
    "run_scenario",
    "sample_estimates",
    "social_precision",
    "stationary_complete_self_weight",
    "stationary_core_periphery",
    "stationary_distribution",
    "stationary_star",
    "build_complete_equal",
    "build_complete_self_weight",
    "build_core_periphery",
    "build_star",
    "weights_from_choices",
    "weights_from_memories",
    "write_result",
]
