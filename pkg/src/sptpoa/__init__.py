"""Exact tools for the price of anarchy of SPT scheduling games on related machines."""
from .dualfit import (
    CriticalJobs,
    DualFitting,
    SubChains,
    check_floor_lemma,
    check_half_bound,
    check_subchain_endpoint,
    critical_jobs,
    make_fitting,
    sub_chains,
    verify_fitting,
)
from .equilibrium import (
    PoaReport,
    TieBreak,
    bound_formula,
    brute_force_nash,
    compute_poa,
    ibarra_kim,
    is_divisible_speeds,
    is_nash,
)
from .errors import (
    BoundViolation,
    DegenerateInstanceError,
    GuardExceededError,
    InvariantViolation,
    PreconditionError,
    ValidationError,
)
from .io import parse_instance, parse_schedule
from .lp import (
    Constraint,
    LinearProgram,
    LpSolution,
    build_dual,
    build_primal,
    check_point_feasible,
    simplex_solve,
    transpose_dual,
)
from .model import (
    Instance,
    Schedule,
    completion_time,
    completion_times,
    normalize,
    psi,
    social_cost,
)
from .optimal import (
    MftTrace,
    block_star,
    brute_force_optimal,
    check_consecutive_property,
    is_optimal,
    mft_schedule,
)

__version__ = "0.1.0"
