"""Solvers for K-anonymous signaling: partition impression categories into
bundles of at least K categories, maximizing second-price welfare or revenue.
"""
from ._kernel import BACKEND
from .approx import (
    CardinalityConfig,
    RevenueTransferConfig,
    approx_welfare,
    merge_pairwise,
    repair_to_k_anonymous,
    solve_cardinality,
    transfer_revenue,
)
from .exact import ExactConfig, enumerate_partitions, solve_exact
from .flow import Arc, FlowNetwork, min_cost_feasible_flow
from .gen import (
    CardinalityInstance,
    GapParams,
    SspsParams,
    gen_gap,
    gen_random,
    gen_revenue_reduction,
    gen_welfare_reduction,
    verify_reduction_iff,
)
from .model import (
    Evaluation,
    InfeasibleError,
    Instance,
    InvalidInputError,
    KanonError,
    ScaleError,
    SignalingScheme,
    StructuredValuation,
    bundle_values,
    check_k_anonymous,
    evaluate_revenue,
    evaluate_welfare,
    validate_instance,
)
from .special import solve_constant_signals, solve_fixed_winners, solve_structured_dp

__version__ = "0.1.0"
