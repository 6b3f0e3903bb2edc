"""Probabilistic Hadamard-like and general complement gates on two-state sets.

Decide feasibility of success efficiencies, optimize them, build the
unitary-plus-probe machine and simulate post-selection.
"""

from .errors import *  # noqa: F401,F403
from .feasibility import (
    EfficiencyPair,
    FeasibilityReport,
    bound_minus,
    bound_plus,
    check_feasible,
    is_polar_great_circle,
    residual,
)
from .grams import GateSpec, GramSet, build_grams
from .linalg import (
    EigenDecomposition,
    PsdClass,
    PsdTag,
    gram_factor,
    hermitian_eig,
    principal_sqrt_psd,
    psd_classify,
    unitary_completion,
)
from .optimize import OptimizationResult, grid_oracle, maximize_branch
from .simulate import SimulationReport, SplitMix64, exact_run, monte_carlo
from .states import QubitState, StateSet, complement, from_bloch, independence_rank, make_state_set
from .synthesis import (
    MINUS,
    PLUS,
    AuditReport,
    BranchSynthesis,
    ProbeSpace,
    SynthesisResult,
    build_branch,
    joint_audit,
    synthesize,
)

__version__ = "0.1.0"
