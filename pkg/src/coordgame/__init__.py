"""Coordination games on graphs: construction, equilibrium checking and
computation, improvement dynamics, and inefficiency analysis."""

from .analysis import (
    InefficiencyReport,
    KEquilibriumStats,
    inefficiency,
    social_optimum,
    transition_value,
)
from .colorforest import default_start, solve_color_forest, verify_color_forest
from .deviations import (
    DEFAULT_BUDGET,
    DeviationReport,
    KeyLemmaAudit,
    UniformityReport,
    apply_report,
    audit_key_lemma,
    build_report,
    find_profitable_deviation,
    is_k_equilibrium,
    is_uniform,
    iter_profitable_deviations,
)
from .dynamics import (
    ImprovementTrace,
    PotentialValue,
    PseudoforestPotential,
    SortedPayoffPotential,
    WelfarePotential,
    run_improvement_path,
)
from .errors import (
    BudgetExceededError,
    CoordGameError,
    FeasibilityError,
    ParseError,
    StructuralError,
)
from .fileformat import parse_instance, parse_profile, serialize_instance
from .game import (
    ColorAssignment,
    CoordinationGame,
    JointStrategy,
    payoff,
    payoffs,
    social_welfare,
    social_welfare_restricted,
    unicolored_cycle_count,
    unicolored_edges,
)
from .graph import (
    Graph,
    GraphClass,
    boundary_edges,
    classify,
    feedback_edge_number,
    induced_subgraph,
    private_edge,
)
from .instances import NamedInstance, generate
from .solvers import (
    PseudotreeSolution,
    brute_strong_equilibrium,
    solve_auto,
    solve_color_complete,
    solve_pseudoforest,
    solve_pseudoforest_detailed,
    solve_tree,
)

__version__ = "0.1.0"

__all__ = [
    "BudgetExceededError",
    "ColorAssignment",
    "CoordGameError",
    "CoordinationGame",
    "DEFAULT_BUDGET",
    "DeviationReport",
    "FeasibilityError",
    "Graph",
    "GraphClass",
    "ImprovementTrace",
    "InefficiencyReport",
    "JointStrategy",
    "KEquilibriumStats",
    "KeyLemmaAudit",
    "NamedInstance",
    "ParseError",
    "PotentialValue",
    "PseudoforestPotential",
    "PseudotreeSolution",
    "SortedPayoffPotential",
    "StructuralError",
    "UniformityReport",
    "WelfarePotential",
    "apply_report",
    "audit_key_lemma",
    "boundary_edges",
    "brute_strong_equilibrium",
    "build_report",
    "classify",
    "default_start",
    "feedback_edge_number",
    "find_profitable_deviation",
    "generate",
    "induced_subgraph",
    "inefficiency",
    "is_k_equilibrium",
    "is_uniform",
    "iter_profitable_deviations",
    "parse_instance",
    "parse_profile",
    "payoff",
    "payoffs",
    "private_edge",
    "run_improvement_path",
    "serialize_instance",
    "social_optimum",
    "social_welfare",
    "social_welfare_restricted",
    "solve_auto",
    "solve_color_complete",
    "solve_color_forest",
    "solve_pseudoforest",
    "solve_pseudoforest_detailed",
    "solve_tree",
    "transition_value",
    "unicolored_cycle_count",
    "unicolored_edges",
    "verify_color_forest",
]
