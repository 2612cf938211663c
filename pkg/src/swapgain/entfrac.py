"""State families, Bell/magic bases, and the singlet fraction.

The singlet fraction F of a two-qubit state is its maximal overlap with any
maximally entangled state. Two independent routes are provided: the fast
magic-basis eigenvalue path and a grid-plus-refinement brute force over all
maximally entangled kets (U (x) I)|Phi+>.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np
from scipy.optimize import minimize_scalar

from .qcore import I2, projector, tensor_product

SQRT_HALF = 1.0 / np.sqrt(2.0)


class BellLabel(Enum):
    PSI_PLUS = "psi_plus"
    PSI_MINUS = "psi_minus"
    PHI_PLUS = "phi_plus"
    PHI_MINUS = "phi_minus"


@dataclass(frozen=True)
class FamilyParams:
    """Mixing weight p in (0,1] and Schmidt parameter a in (0,1)."""

    p: float
    a: float

    def __post_init__(self):
        if not 0.0 < self.p <= 1.0:
            raise ValueError(f"p must lie in (0, 1], got {self.p}")
        if not 0.0 < self.a < 1.0:
            raise ValueError(f"a must lie in (0, 1), got {self.a}")


@dataclass(frozen=True)
class MaxEntParam:
    """Angles of the one-sided unitary applied to |Phi+>."""

    theta: float
    alpha: float
    beta: float


_BELL_VECTORS = {
    BellLabel.PSI_PLUS: np.array([0, SQRT_HALF, SQRT_HALF, 0], dtype=complex),
    BellLabel.PSI_MINUS: np.array([0, SQRT_HALF, -SQRT_HALF, 0], dtype=complex),
    BellLabel.PHI_PLUS: np.array([SQRT_HALF, 0, 0, SQRT_HALF], dtype=complex),
    BellLabel.PHI_MINUS: np.array([SQRT_HALF, 0, 0, -SQRT_HALF], dtype=complex),
}

# Magic basis: phases chosen so that maximally entangled states are exactly
# the real unit vectors. |Psi-> is itself a basis element.
MAGIC_BASIS = np.column_stack(
    [
        _BELL_VECTORS[BellLabel.PHI_PLUS],
        1j * _BELL_VECTORS[BellLabel.PHI_MINUS],
        1j * _BELL_VECTORS[BellLabel.PSI_PLUS],
        _BELL_VECTORS[BellLabel.PSI_MINUS],
    ]
)


def bell_state(label: BellLabel) -> np.ndarray:
    """One of the four orthonormal Bell kets as a length-4 vector."""
    return _BELL_VECTORS[label].copy()


def make_rho_ab(params: FamilyParams) -> np.ndarray:
    """p |v><v| + (1-p)|00><00| with |v> = sqrt(a)|01> - sqrt(1-a)|10>."""
    p, a = params.p, params.a
    v = np.array([0, np.sqrt(a), -np.sqrt(1 - a), 0], dtype=complex)
    ket00 = np.array([1, 0, 0, 0], dtype=complex)
    return p * projector(v) + (1 - p) * projector(ket00)


def make_rho_bc(params: FamilyParams) -> np.ndarray:
    """Mirror of make_rho_ab with |v> = sqrt(a)|10> - sqrt(1-a)|01>."""
    p, a = params.p, params.a
    v = np.array([0, -np.sqrt(1 - a), np.sqrt(a), 0], dtype=complex)
    ket00 = np.array([1, 0, 0, 0], dtype=complex)
    return p * projector(v) + (1 - p) * projector(ket00)


def magic_overlap_matrix(state: np.ndarray) -> np.ndarray:
    """M[i,j] = <e_i| state |e_j> in the magic basis."""
    state = np.asarray(state, dtype=complex)
    if state.shape != (4, 4):
        raise ValueError(f"expected a 4x4 matrix, got shape {state.shape}")
    return MAGIC_BASIS.conj().T @ state @ MAGIC_BASIS


def singlet_fraction_magic(state: np.ndarray) -> float:
    """Largest eigenvalue of Re(M) in the magic basis; the singlet fraction."""
    m_real = np.real(magic_overlap_matrix(state))
    m_real = (m_real + m_real.T) / 2
    top = float(np.linalg.eigvalsh(m_real)[-1])
    return float(np.clip(top, 0.0, 1.0))


def optimal_max_ent_ket(state: np.ndarray) -> np.ndarray:
    """The maximally entangled ket achieving the singlet fraction of state."""
    m_real = np.real(magic_overlap_matrix(state))
    m_real = (m_real + m_real.T) / 2
    _, vecs = np.linalg.eigh(m_real)
    return MAGIC_BASIS @ vecs[:, -1].astype(complex)


def singlet_alignment(state: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Local unitaries (U_A, U_B) rotating the optimal maximally entangled
    state of `state` onto |Psi->. Identity pair if already aligned; ties in
    the top eigenvalue resolve to the eigendecomposition's leading vector."""
    f = singlet_fraction_magic(state)
    psi_minus = _BELL_VECTORS[BellLabel.PSI_MINUS]
    if np.real(psi_minus.conj() @ np.asarray(state, dtype=complex) @ psi_minus) >= f - 1e-12:
        return I2.copy(), I2.copy()
    ket = optimal_max_ent_ket(state)
    # ket = (V (x) I)|Psi->, so V = sqrt(2)*T @ S^T with T the coefficient
    # matrix of ket and S the singlet's sqrt(2)-scaled coefficient matrix.
    t_mat = ket.reshape(2, 2)
    s_mat = np.array([[0, 1], [-1, 0]], dtype=complex)
    v = np.sqrt(2.0) * t_mat @ s_mat.conj().T
    return v.conj().T, I2.copy()


def apply_local(state: np.ndarray, u_left: np.ndarray, u_right: np.ndarray) -> np.ndarray:
    """(U_L (x) U_R) state (U_L (x) U_R)^dagger."""
    u = tensor_product(u_left, u_right)
    return u @ state @ u.conj().T


def max_ent_ket(theta: float, alpha: float, beta: float) -> np.ndarray:
    """(U(theta,alpha,beta) (x) I)|Phi+> for the standard SU(2) angles."""
    c, s = np.cos(theta), np.sin(theta)
    u = np.array(
        [
            [np.exp(1j * alpha) * c, np.exp(1j * beta) * s],
            [-np.exp(-1j * beta) * s, np.exp(-1j * alpha) * c],
        ]
    )
    return u.reshape(-1) * SQRT_HALF


def max_ent_state(param: MaxEntParam) -> np.ndarray:
    return max_ent_ket(param.theta, param.alpha, param.beta)


def initial_singlet_fraction(params: FamilyParams) -> float:
    """max{p(sqrt(a)+sqrt(1-a))^2/2, (1-p)/2} for the family states."""
    p, a = params.p, params.a
    return max(p * (np.sqrt(a) + np.sqrt(1 - a)) ** 2 / 2, (1 - p) / 2)


def teleport_fidelity_from_F(F: float) -> float:
    """Optimal teleportation fidelity (2F+1)/3 of a singlet-fraction-F resource."""
    if not 0.0 <= F <= 1.0:
        raise ValueError(f"singlet fraction must lie in [0, 1], got {F}")
    return (2 * F + 1) / 3


def bell_diagonal_state(weights) -> np.ndarray:
    """Mixture of the four Bell projectors with the given weights.

    Weight order follows BellLabel: (Psi+, Psi-, Phi+, Phi-)."""
    w = np.asarray(weights, dtype=float)
    if w.shape != (4,) or w.min() < 0 or abs(w.sum() - 1.0) > 1e-12:
        raise ValueError("weights must be four nonnegative reals summing to 1")
    state = np.zeros((4, 4), dtype=complex)
    for wi, label in zip(w, BellLabel):
        state += wi * projector(_BELL_VECTORS[label])
    return state


@lru_cache(maxsize=4)
def _max_ent_grid(resolution: int) -> tuple[np.ndarray, np.ndarray]:
    """Grid of maximally entangled kets over (theta, alpha, beta)."""
    thetas = np.linspace(0.0, np.pi / 2, resolution)
    alphas = np.linspace(0.0, 2 * np.pi, resolution, endpoint=False)
    betas = np.linspace(0.0, 2 * np.pi, resolution, endpoint=False)
    angles = np.array(np.meshgrid(thetas, alphas, betas, indexing="ij")).reshape(3, -1).T
    kets = np.empty((angles.shape[0], 4), dtype=complex)
    for k, (th, al, be) in enumerate(angles):
        kets[k] = max_ent_ket(th, al, be)
    return angles, kets


def singlet_fraction_bruteforce(state: np.ndarray, grid: int = 24, refine_iters: int = 60) -> float:
    """Definitional singlet fraction: grid search over maximally entangled
    kets followed by per-angle bounded refinement. Oracle for the magic path."""
    state = np.asarray(state, dtype=complex)
    if state.shape != (4, 4):
        raise ValueError(f"expected a 4x4 matrix, got shape {state.shape}")
    angles, kets = _max_ent_grid(grid)
    overlaps = np.real(np.einsum("ki,ij,kj->k", kets.conj(), state, kets))
    best_idx = int(np.argmax(overlaps))
    x = angles[best_idx].copy()
    best = float(overlaps[best_idx])

    def overlap(v):
        ket = max_ent_ket(v[0], v[1], v[2])
        return float(np.real(ket.conj() @ state @ ket))

    # Coordinate descent with golden-section line searches; the search span
    # halves only once a full sweep over the three angles stops improving.
    spans = np.array([np.pi / 2 / (grid - 1), 2 * np.pi / grid, 2 * np.pi / grid])
    sweep_start = best
    for it in range(refine_iters):
        coord = it % 3

        def negated(val, coord=coord):
            trial = x.copy()
            trial[coord] = val
            return -overlap(trial)

        res = minimize_scalar(
            negated,
            bounds=(x[coord] - spans[coord], x[coord] + spans[coord]),
            method="bounded",
            options={"xatol": 1e-10},
        )
        if -res.fun > best:
            best = float(-res.fun)
            x[coord] = float(res.x)
        if coord == 2:
            if best - sweep_start < 1e-12:
                spans *= 0.5
            sweep_start = best
    return float(np.clip(best, 0.0, 1.0))
