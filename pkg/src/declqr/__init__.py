"""Decentralized LQR synthesis and competitive analysis for interconnected
discrete-time linear systems.

Subsystems sit on a directed interconnection graph; each designer sees
only part of the model and must commit to a gain anyway.  This package
builds such limited-information control strategies, prices them against
the full-information optimum, and certifies worst-case cost ratios.
"""

from .graphs import (
    DirectedGraph,
    SinkBlockPartition,
    adjacency,
    has_loop,
    is_supergraph,
    isolated_nodes,
    sink_block_partition,
    sinks,
)
from .plants import (
    Plant,
    SubsystemPartition,
    block_pattern_graph,
    check_membership,
    diagonalize_b,
    min_singular_value,
    normalize_weights,
    random_plant,
    weight_gain_transform,
)
from .solvers import (
    DareConvergenceError,
    DareSolution,
    UnstableDynamicsError,
    dare_gain,
    shrink_factor,
    solve_dare,
    solve_dlyap,
    spectral_radius,
)
from .strategies import (
    ComplianceReport,
    Gain,
    MatchingConditionError,
    NecessaryConditionsReport,
    Strategy,
    centralized_lqr,
    centralized_strategy,
    check_matching_condition,
    compliance_check,
    composed,
    deadbeat,
    deadbeat_strategy,
    get_strategy,
    necessary_conditions_probe,
    sink_aware,
    sink_aware_strategy,
    underactuated_sink_aware,
)
from .analysis import (
    FAMILY_KINDS,
    BoundReport,
    CertificationConfig,
    CertificationResult,
    CertificationRow,
    CostReport,
    DominationConfig,
    DominationReport,
    MotifNotFoundError,
    RatioConfig,
    RatioReport,
    SweepPoint,
    adversarial_family,
    certification_suite,
    closed_loop_cost,
    competitive_ratio_estimate,
    domination_compare,
    optimal_cost,
    optimal_vs_deadbeat_bound,
    selfloop_optimal_cost,
    sink_selfloop_cost_coefficients,
    truncated_cost_oracle,
    write_certification_csv,
    write_sweep_csv,
)
from .scenarios import Scenario, ScenarioError, generate_example_scenarios, load_scenario
from .cli import main, run

__version__ = "0.1.0"

__all__ = [
    "DirectedGraph", "SinkBlockPartition", "adjacency", "has_loop",
    "is_supergraph", "isolated_nodes", "sink_block_partition", "sinks",
    "Plant", "SubsystemPartition", "block_pattern_graph", "check_membership",
    "diagonalize_b", "min_singular_value", "normalize_weights", "random_plant",
    "weight_gain_transform",
    "DareConvergenceError", "DareSolution", "UnstableDynamicsError", "dare_gain",
    "shrink_factor", "solve_dare", "solve_dlyap", "spectral_radius",
    "ComplianceReport", "Gain", "MatchingConditionError",
    "NecessaryConditionsReport", "Strategy", "centralized_lqr",
    "centralized_strategy", "check_matching_condition", "compliance_check",
    "composed", "deadbeat", "deadbeat_strategy", "get_strategy",
    "necessary_conditions_probe", "sink_aware", "sink_aware_strategy",
    "underactuated_sink_aware",
    "FAMILY_KINDS", "BoundReport", "CertificationConfig", "CertificationResult",
    "CertificationRow", "CostReport", "DominationConfig", "DominationReport",
    "MotifNotFoundError", "RatioConfig", "RatioReport", "SweepPoint",
    "adversarial_family", "certification_suite", "closed_loop_cost",
    "competitive_ratio_estimate", "domination_compare", "optimal_cost",
    "optimal_vs_deadbeat_bound", "selfloop_optimal_cost",
    "sink_selfloop_cost_coefficients", "truncated_cost_oracle",
    "write_certification_csv", "write_sweep_csv",
    "Scenario", "ScenarioError", "generate_example_scenarios", "load_scenario",
    "main", "run",
]
