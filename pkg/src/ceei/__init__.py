"""Solver and verifiers for competitive equilibrium with equal incomes.

Computes fractional market equilibria for additive utilities with unit
budgets, certifies them exactly, decides price-support and fairness notions
for discrete assignments, and searches for welfare-optimal discrete
assignments at desk scale.
"""

from .equilibrium import (
    EquilibriumSolution,
    ResidualReport,
    SolverConfig,
    equilibrium_prices_from_utilities,
    kkt_residual,
    solve_eg,
)
from .errors import (
    CeeiError,
    DimensionMismatch,
    DocumentSyntaxError,
    EmptyMultiset,
    InconclusiveSearch,
    InstanceTooLarge,
    InvalidAssignment,
    InvariantError,
    NonConvergence,
    NotBinary,
    NotIdenticalUtilities,
    SchemaError,
    SumMismatch,
    WindowViolation,
    ZeroUtility,
)
from .fairness import (
    Verdict,
    is_envy_free,
    is_pareto_optimal_discrete,
    verify_ceei_disc,
    verify_ceei_frac,
)
from .instances import (
    PartitionInput,
    ThreePartitionInput,
    binary_gap_example,
    from_partition,
    from_three_partition,
    gen_random,
    instance_digest,
    parse_assignment,
    parse_instance,
    separation_example,
    serialize_assignment,
    serialize_instance,
)
from .model import (
    Certificate,
    DiscreteAssignment,
    DominatingAssignment,
    EnvyPair,
    FractionalAssignment,
    Instance,
    InstanceViolation,
    KktViolation,
    PriceSupport,
    PriceVector,
    ViolatingBundle,
    agent_utilities,
    bundle_utility,
    nash_welfare,
    validate_instance,
)
from .search import (
    SearchBudgets,
    SearchResult,
    binary_max_nash,
    brute_force_max_nash,
    exists_ceei_disc_bruteforce,
    exists_ceei_frac_discrete,
    find_ceei_disc_identical,
    max_nash_discrete,
)

__version__ = "0.1.0"

__all__ = [
    "Certificate",
    "CeeiError",
    "DimensionMismatch",
    "DiscreteAssignment",
    "DocumentSyntaxError",
    "DominatingAssignment",
    "EmptyMultiset",
    "EnvyPair",
    "EquilibriumSolution",
    "FractionalAssignment",
    "InconclusiveSearch",
    "Instance",
    "InstanceTooLarge",
    "InstanceViolation",
    "InvalidAssignment",
    "InvariantError",
    "KktViolation",
    "NonConvergence",
    "NotBinary",
    "NotIdenticalUtilities",
    "PartitionInput",
    "PriceSupport",
    "PriceVector",
    "ResidualReport",
    "SchemaError",
    "SearchBudgets",
    "SearchResult",
    "SolverConfig",
    "SumMismatch",
    "ThreePartitionInput",
    "Verdict",
    "ViolatingBundle",
    "WindowViolation",
    "ZeroUtility",
    "agent_utilities",
    "binary_gap_example",
    "binary_max_nash",
    "brute_force_max_nash",
    "bundle_utility",
    "equilibrium_prices_from_utilities",
    "exists_ceei_disc_bruteforce",
    "exists_ceei_frac_discrete",
    "find_ceei_disc_identical",
    "from_partition",
    "from_three_partition",
    "gen_random",
    "instance_digest",
    "is_envy_free",
    "is_pareto_optimal_discrete",
    "kkt_residual",
    "max_nash_discrete",
    "nash_welfare",
    "parse_assignment",
    "parse_instance",
    "separation_example",
    "serialize_assignment",
    "serialize_instance",
    "solve_eg",
    "validate_instance",
    "verify_ceei_disc",
    "verify_ceei_frac",
]
