"""Entanglement swapping: Bell measurement on the middle pair, conditional
branch states, closed-form family branches, and the deterministic strategy
that replaces sub-1/2 branches with a product state."""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .entfrac import (
    BellLabel,
    FamilyParams,
    bell_state,
    make_rho_ab,
    make_rho_bc,
    bell_diagonal_state,
    singlet_alignment,
    singlet_fraction_magic,
    apply_local,
)
from .qcore import I2, I4, PAULI_X, PAULI_Z, projector, tensor_product, validate_density

PROB_FLOOR = 1e-12

# Pauli correction applied on Charlie's side per Bell outcome, fixed by
# requiring the corrected family branches to take the canonical forms
# (Psi- outcome needs none). Asserted by tests, not derived per call.
CORRECTION_TABLE: dict[BellLabel, tuple[np.ndarray, np.ndarray]] = {
    BellLabel.PSI_MINUS: (I2, I2),
    BellLabel.PSI_PLUS: (I2, PAULI_Z),
    BellLabel.PHI_MINUS: (I2, PAULI_X),
    BellLabel.PHI_PLUS: (I2, PAULI_X @ PAULI_Z),
}


@dataclass(frozen=True)
class SwapBranch:
    """One Bell outcome of the swap: probability and conditional state on (A,C)."""

    outcome: BellLabel
    probability: float
    state: np.ndarray
    singlet_fraction: float
    usable: bool = True


@dataclass(frozen=True)
class SwapEnsemble:
    branches: tuple[SwapBranch, SwapBranch, SwapBranch, SwapBranch]

    def branch(self, outcome: BellLabel) -> SwapBranch:
        for b in self.branches:
            if b.outcome is outcome:
                return b
        raise KeyError(outcome)

    @property
    def average_state(self) -> np.ndarray:
        return sum(b.probability * b.state for b in self.branches)


class ClosedBranch(NamedTuple):
    state: np.ndarray
    probability: float
    singlet_fraction: float


class CorrectedBranch(NamedTuple):
    unitaries: tuple[np.ndarray, np.ndarray]
    state: np.ndarray


class DeterministicSwapResult(NamedTuple):
    state: np.ndarray
    singlet_fraction: float


def swap_general(rho_ab: np.ndarray, rho_bc: np.ndarray) -> SwapEnsemble:
    """Bell measurement on the middle pair of rho_ab (x) rho_bc, from first
    principles: project (B1,B2) onto each Bell ket, trace it out, normalize.
    No correction unitary is applied; branch states are raw conditionals."""
    rho_ab = np.asarray(rho_ab, dtype=complex)
    rho_bc = np.asarray(rho_bc, dtype=complex)
    if rho_ab.shape != (4, 4) or rho_bc.shape != (4, 4):
        raise ValueError("swap_general expects two 4x4 density operators")
    joint = tensor_product(rho_ab, rho_bc)  # qubits (A, B1, B2, C)
    branches = []
    for label in BellLabel:
        bra = bell_state(label).conj().reshape(1, 4)
        contract = tensor_product(I2, tensor_product(bra, I2))  # (4, 16)
        sub = contract @ joint @ contract.conj().T
        prob = float(np.real(sub.trace()))
        if prob > PROB_FLOOR:
            state = validate_density(sub / prob)
            branches.append(
                SwapBranch(label, prob, state, singlet_fraction_magic(state))
            )
        else:
            branches.append(SwapBranch(label, max(prob, 0.0), I4 / 4, 0.25, usable=False))
    return SwapEnsemble(tuple(branches))


def _family_n(params: FamilyParams) -> float:
    p, a = params.p, params.a
    return 2 * p * p * a * (1 - a) + 2 * p * (1 - p) * a


def psi_branch_closed(params: FamilyParams) -> ClosedBranch:
    """Closed-form conditional state, probability, and singlet fraction of the
    Psi+/Psi- outcomes for the family states (after canonical correction)."""
    p, a = params.p, params.a
    n = _family_n(params)
    if n < 1e-15:
        raise ValueError("Psi branch probability vanishes; branch is degenerate")
    psi_minus = bell_state(BellLabel.PSI_MINUS)
    ket00 = np.array([1, 0, 0, 0], dtype=complex)
    state = (
        2 * p * p * a * (1 - a) * projector(psi_minus)
        + 2 * p * (1 - p) * a * projector(ket00)
    ) / n
    f = max(2 * p * p * a * (1 - a), p * (1 - p) * a) / n
    return ClosedBranch(validate_density(state), n, f)


def phi_branch_closed(params: FamilyParams) -> ClosedBranch:
    """Closed-form Phi+/Phi- branch. The component weights sum to 1-N, the
    probability of this outcome pair, so dividing by 1-N gives the unit-trace
    conditional state."""
    p, a = params.p, params.a
    n = _family_n(params)
    if 1 - n < 1e-15:
        raise ValueError("Phi branch probability vanishes; branch is degenerate")
    coherent = np.array([0, a, -(1 - a), 0], dtype=complex)
    ket00 = np.array([1, 0, 0, 0], dtype=complex)
    ket01 = np.array([0, 1, 0, 0], dtype=complex)
    ket11 = np.array([0, 0, 0, 1], dtype=complex)
    unnormalized = (
        p * p * projector(coherent)
        + (1 - p) ** 2 * projector(ket01)
        + p * (1 - p) * (1 - a) * (projector(ket00) + projector(ket11))
    )
    state = unnormalized / (1 - n)
    f = max((1 - 2 * p + 2 * p * p) / 2, (1 - a) * (1 - p) * p) / (1 - n)
    return ClosedBranch(validate_density(state), 1 - n, f)


def canonical_correction(branch: SwapBranch) -> CorrectedBranch:
    """Apply the outcome's fixed local Pauli pair; singlet fraction is unchanged."""
    if branch.probability <= 0:
        raise ValueError("cannot correct a zero-probability branch")
    u_a, u_c = CORRECTION_TABLE[branch.outcome]
    return CorrectedBranch((u_a, u_c), apply_local(branch.state, u_a, u_c))


def deterministic_swap(params: FamilyParams) -> DeterministicSwapResult:
    """Trace-preserving strategy: keep each corrected branch aligned to |Psi->
    when its singlet fraction exceeds 1/2, otherwise replace it with |01><01|.
    Returns the probability-weighted average state and average singlet fraction."""
    ensemble = swap_general(make_rho_ab(params), make_rho_bc(params))
    ket01 = np.array([0, 1, 0, 0], dtype=complex)
    replacement = projector(ket01)
    avg_state = np.zeros((4, 4), dtype=complex)
    avg_f = 0.0
    for branch in ensemble.branches:
        if not branch.usable:
            continue
        if branch.singlet_fraction > 0.5:
            corrected = canonical_correction(branch).state
            u_a, u_b = singlet_alignment(corrected)
            avg_state += branch.probability * apply_local(corrected, u_a, u_b)
            avg_f += branch.probability * branch.singlet_fraction
        else:
            avg_state += branch.probability * replacement
            avg_f += branch.probability * 0.5
    return DeterministicSwapResult(validate_density(avg_state), avg_f)


def bell_diagonal_nogo_check(weights_ab, weights_bc) -> tuple[float, tuple[float, float]]:
    """Swap two Bell-diagonal states and report the largest conditional branch
    singlet fraction next to the pair of input fractions. For entangled
    Bell-diagonal inputs the branch maximum never beats the inputs."""
    rho_ab = bell_diagonal_state(weights_ab)
    rho_bc = bell_diagonal_state(weights_bc)
    ensemble = swap_general(rho_ab, rho_bc)
    max_branch = max(
        (b.singlet_fraction for b in ensemble.branches if b.usable), default=0.0
    )
    return max_branch, (singlet_fraction_magic(rho_ab), singlet_fraction_magic(rho_bc))
