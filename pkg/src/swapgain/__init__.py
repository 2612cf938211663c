"""Entanglement swapping that increases the singlet fraction: state families,
swap branches, optimal trace-preserving filtering, teleportation strategies,
and a heralded linear-optics realization."""

from .entfrac import (
    BellLabel,
    FamilyParams,
    MaxEntParam,
    bell_diagonal_state,
    bell_state,
    initial_singlet_fraction,
    make_rho_ab,
    make_rho_bc,
    max_ent_state,
    singlet_fraction_bruteforce,
    singlet_fraction_magic,
    teleport_fidelity_from_F,
)
from .filtering import (
    FilterRegime,
    FilterSolution,
    LocalFilter,
    apply_tp_filter_ab,
    apply_tp_filter_bc,
    optimal_filter_closed,
    optimal_filter_numeric,
)
from .optics import (
    BeamSplitterSpec,
    DetectionEvent,
    FockVector,
    ModeRegister,
    apply_beam_splitter,
    prepare_sources,
    run_heralded_swap,
    run_loss_stage,
)
from .qcore import (
    hermitian_eigensystem,
    partial_trace,
    partial_transpose,
    tensor_product,
    validate_density,
)
from .swap import (
    SwapBranch,
    SwapEnsemble,
    bell_diagonal_nogo_check,
    canonical_correction,
    deterministic_swap,
    phi_branch_closed,
    psi_branch_closed,
    swap_general,
)
from .teleport import (
    QuantumChannel,
    StrategyReport,
    align_resource,
    average_fidelity,
    compose,
    strategy_one_fidelity,
    strategy_two_fidelity,
    teleportation_channel,
)

__version__ = "0.1.0"
