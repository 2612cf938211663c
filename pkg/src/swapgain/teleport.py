"""Teleportation channels from two-qubit resources, channel composition, and
the two-strategy fidelity comparison.

Channels are stored as trace-one Choi states C = (id (x) channel)|Phi+><Phi+|
with the reference (input) factor first. The canonical resource is |Psi->:
the Pauli correction table is fixed by requiring that teleporting through a
perfect |Psi-> yields the identity channel.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .entfrac import (
    BellLabel,
    FamilyParams,
    bell_state,
    singlet_alignment,
    singlet_fraction_magic,
    teleport_fidelity_from_F,
    apply_local,
)
from .filtering import apply_tp_filter_ab, apply_tp_filter_bc
from .qcore import (
    I2,
    PAULI_X,
    PAULI_Z,
    partial_trace,
    projector,
    tensor_product,
)
from .swap import deterministic_swap

# Correction applied on the receiving side per Bell outcome of the sender's
# measurement (phases are irrelevant under conjugation).
TELEPORT_CORRECTIONS: dict[BellLabel, np.ndarray] = {
    BellLabel.PSI_MINUS: I2,
    BellLabel.PSI_PLUS: PAULI_Z,
    BellLabel.PHI_MINUS: PAULI_X,
    BellLabel.PHI_PLUS: PAULI_X @ PAULI_Z,
}

_PHI_PLUS_PROJ = projector(bell_state(BellLabel.PHI_PLUS))

# Six Pauli eigenstates: a 2-design sufficient for averaging fidelity.
_SIX_STATES = [
    np.array([1, 0], dtype=complex),
    np.array([0, 1], dtype=complex),
    np.array([1, 1], dtype=complex) / np.sqrt(2),
    np.array([1, -1], dtype=complex) / np.sqrt(2),
    np.array([1, 1j], dtype=complex) / np.sqrt(2),
    np.array([1, -1j], dtype=complex) / np.sqrt(2),
]


@dataclass(frozen=True)
class QuantumChannel:
    """Single-qubit CPTP map stored as its trace-one Choi state."""

    choi: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.choi, dtype=complex)
        if c.shape != (4, 4):
            raise ValueError(f"Choi matrix must be 4x4, got shape {c.shape}")
        if np.linalg.eigvalsh((c + c.conj().T) / 2).min() < -1e-9:
            raise ValueError("Choi matrix is not positive semidefinite")
        marginal = partial_trace(c, (2, 2), keep={0})
        if np.abs(marginal - I2 / 2).max() > 1e-9:
            raise ValueError("channel is not trace preserving")
        object.__setattr__(self, "choi", c)


@dataclass(frozen=True)
class StrategyReport:
    p: float
    a: float
    fidelity_strategy1: float
    fidelity_strategy2: float

    def __post_init__(self):
        for f in (self.fidelity_strategy1, self.fidelity_strategy2):
            if not 0.0 <= f <= 1.0:
                raise ValueError(f"fidelity {f} outside [0, 1]")


class AlignedResource(NamedTuple):
    state: np.ndarray
    unitaries: tuple[np.ndarray, np.ndarray]


def align_resource(state: np.ndarray) -> AlignedResource:
    """Rotate a two-qubit state so its best maximally entangled overlap is
    attained at |Psi->; returns the rotated state and the local unitary pair."""
    u_a, u_b = singlet_alignment(state)
    return AlignedResource(apply_local(state, u_a, u_b), (u_a, u_b))


def teleportation_channel(resource: np.ndarray) -> QuantumChannel:
    """Standard Bell-measurement teleportation through `resource`, averaged
    over outcomes with the fixed Pauli corrections. The resource should be
    aligned (see align_resource); unaligned input is accepted with a warning
    since (2F+1)/3 is then not guaranteed."""
    resource = np.asarray(resource, dtype=complex)
    if resource.shape != (4, 4):
        raise ValueError(f"resource must be a 4x4 density operator, got {resource.shape}")
    psi_minus = bell_state(BellLabel.PSI_MINUS)
    overlap = float(np.real(psi_minus.conj() @ resource @ psi_minus))
    if overlap < singlet_fraction_magic(resource) - 1e-9:
        warnings.warn(
            "teleportation resource is not aligned to |Psi->; "
            "the (2F+1)/3 fidelity contract does not apply",
            stacklevel=2,
        )
    contractions = []
    for label in BellLabel:
        bra = bell_state(label).conj().reshape(1, 4)
        k = tensor_product(bra, I2)  # (2, 8) acting on (input, A, B)
        contractions.append((k, TELEPORT_CORRECTIONS[label]))

    def channel_map(rho_in: np.ndarray) -> np.ndarray:
        joint = tensor_product(rho_in, resource)
        out = np.zeros((2, 2), dtype=complex)
        for k, u in contractions:
            out += u @ (k @ joint @ k.conj().T) @ u.conj().T
        return out

    return QuantumChannel(_choi_from_map(channel_map))


def _choi_from_map(channel_map) -> np.ndarray:
    basis = np.eye(2, dtype=complex)
    choi = np.zeros((4, 4), dtype=complex)
    for i in range(2):
        for j in range(2):
            e_ij = np.outer(basis[i], basis[j].conj())
            choi += tensor_product(e_ij, channel_map(e_ij)) / 2
    return choi


def choi_to_kraus(channel: QuantumChannel, tol: float = 1e-12) -> list[np.ndarray]:
    """Kraus operators recovered from the Choi state's eigendecomposition."""
    vals, vecs = np.linalg.eigh((channel.choi + channel.choi.conj().T) / 2)
    kraus = []
    for lam, vec in zip(vals, vecs.T):
        if lam > tol:
            kraus.append(np.sqrt(2 * lam) * vec.reshape(2, 2).T)
    return kraus


def apply_channel(channel: QuantumChannel, rho: np.ndarray) -> np.ndarray:
    """Act on a single-qubit state through the Choi representation."""
    rho = np.asarray(rho, dtype=complex)
    op = tensor_product(rho.T, I2) @ channel.choi
    return 2 * partial_trace(op, (2, 2), keep={1})


def compose(second: QuantumChannel, first: QuantumChannel) -> QuantumChannel:
    """Choi state of second o first."""
    kraus = [k2 @ k1 for k2 in choi_to_kraus(second) for k1 in choi_to_kraus(first)]
    choi = np.zeros((4, 4), dtype=complex)
    for k in kraus:
        ik = tensor_product(I2, k)
        choi += ik @ _PHI_PLUS_PROJ @ ik.conj().T
    return QuantumChannel(choi)


def identity_channel() -> QuantumChannel:
    return QuantumChannel(_PHI_PLUS_PROJ.copy())


def depolarizing_channel() -> QuantumChannel:
    return QuantumChannel(np.eye(4, dtype=complex) / 4)


def average_fidelity(channel: QuantumChannel) -> float:
    """(2 F_e + 1)/3 with F_e the entanglement fidelity <Phi+|C|Phi+>."""
    phi_plus = bell_state(BellLabel.PHI_PLUS)
    f_e = float(np.real(phi_plus.conj() @ channel.choi @ phi_plus))
    return (2 * f_e + 1) / 3


def six_state_average_fidelity(channel: QuantumChannel) -> float:
    """Haar-average fidelity computed independently over the six Pauli
    eigenstates; oracle for average_fidelity."""
    total = 0.0
    for ket in _SIX_STATES:
        out = apply_channel(channel, projector(ket))
        total += float(np.real(ket.conj() @ out @ ket))
    return total / 6


def strategy_one_fidelity(params: FamilyParams) -> float:
    """Filter both links deterministically, then teleport twice in sequence."""
    ch_ab = teleportation_channel(align_resource(apply_tp_filter_ab(params)).state)
    ch_bc = teleportation_channel(align_resource(apply_tp_filter_bc(params)).state)
    return average_fidelity(compose(ch_bc, ch_ab))


def strategy_two_fidelity(params: FamilyParams) -> float:
    """Swap at the middle node deterministically, then teleport once."""
    return teleport_fidelity_from_F(deterministic_swap(params).singlet_fraction)


def compare_strategies(params: FamilyParams) -> StrategyReport:
    return StrategyReport(
        params.p,
        params.a,
        strategy_one_fidelity(params),
        strategy_two_fidelity(params),
    )
