"""Optimal trace-preserving local filtering of the family states.

The production path is the closed-form solution of the rank-one semidefinite
program; a reduced grid-plus-refinement search over diagonal filters and a
dense random-restart sweep serve as the numeric oracle.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.optimize import minimize, minimize_scalar

from .entfrac import (
    BellLabel,
    FamilyParams,
    bell_state,
    magic_overlap_matrix,
    make_rho_ab,
    make_rho_bc,
)
from .qcore import I2, partial_transpose, projector, tensor_product, validate_density


class FilterRegime(Enum):
    FILTERING = "filtering"
    IDENTITY = "identity"


@dataclass(frozen=True)
class LocalFilter:
    """A 2x2 measurement-operator branch A with A^dagger A <= I."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.shape != (2, 2):
            raise ValueError(f"filter must be 2x2, got shape {m.shape}")
        gram_eigs = np.linalg.eigvalsh(m.conj().T @ m)
        if gram_eigs.max() > 1 + 1e-12:
            raise ValueError(f"filter violates A^t A <= I (top eigenvalue {gram_eigs.max()})")
        object.__setattr__(self, "matrix", m)


@dataclass(frozen=True)
class FilterSolution:
    f_star: float
    filter: LocalFilter
    success_probability: float
    regime: FilterRegime
    converged: bool = True

    def __post_init__(self):
        if self.f_star < 0.5 - 1e-12:
            raise ValueError(f"optimal average singlet fraction {self.f_star} below 1/2")
        if self.regime is FilterRegime.IDENTITY:
            if np.abs(self.filter.matrix - I2).max() > 1e-9:
                raise ValueError("identity regime requires the identity filter")


@dataclass(frozen=True)
class SdpCandidate:
    """Symmetry-reduced SDP variable: X of the sparse corner form with
    x3 = x4 = 0, real entries, rank one."""

    x1: float
    x2: float
    x5: float
    x6: float

    def __post_init__(self):
        x = self.matrix()
        if abs(self.x2 - self.x5) > 1e-10:
            raise ValueError("Hermiticity requires x2 == x5")
        if sdp_constraint_violation(x) > 1e-10:
            raise ValueError("candidate violates the SDP constraints")
        svals = np.linalg.svd(x, compute_uv=False)
        if svals[1] > 1e-9:
            raise ValueError("candidate is not rank one")

    def matrix(self) -> np.ndarray:
        x = np.zeros((4, 4), dtype=complex)
        x[0, 0], x[0, 3] = self.x1, self.x2
        x[3, 0], x[3, 3] = self.x5, self.x6
        return x


def filter_to_sdp_matrix(filter_matrix: np.ndarray) -> np.ndarray:
    """X = (I (x) A)|Phi+><Phi+|(I (x) A)^dagger, the SDP variable induced by A."""
    ia = tensor_product(I2, np.asarray(filter_matrix, dtype=complex))
    return ia @ projector(bell_state(BellLabel.PHI_PLUS)) @ ia.conj().T


def sdp_objective(x: np.ndarray, rho: np.ndarray) -> float:
    """1/2 - Tr(X rho^Gamma) with the partial transpose on the second qubit."""
    rho_pt = partial_transpose(rho, (2, 2), 1)
    return 0.5 - float(np.real(np.trace(x @ rho_pt)))


def sdp_constraint_violation(x: np.ndarray) -> float:
    """Largest violation of 0 <= X <= I and -I/2 <= X^Gamma <= I/2 (0 if feasible)."""
    eigs = np.linalg.eigvalsh((x + x.conj().T) / 2)
    eigs_pt = np.linalg.eigvalsh(
        (lambda m: (m + m.conj().T) / 2)(partial_transpose(x, (2, 2), 1))
    )
    return max(0.0, -eigs.min(), eigs.max() - 1.0, np.abs(eigs_pt).max() - 0.5)


def optimal_filter_closed(params: FamilyParams) -> FilterSolution:
    """Closed-form optimal trace-preserving filter for a family state.

    Filtering regime when sqrt(a(1-a)) p/(1-p) < 1, identity otherwise
    (p = 1 forces the identity regime)."""
    p, a = params.p, params.a
    root = np.sqrt(a * (1 - a))
    if p < 1.0 and root * p / (1 - p) < 1.0:
        f_star = 0.5 + a * (1 - a) * p * p / (2 * (1 - p))
        filt = LocalFilter(np.diag([root * p / (1 - p), 1.0]).astype(complex))
        regime = FilterRegime.FILTERING
    else:
        f_star = p / 2 + root * p
        filt = LocalFilter(I2.copy())
        regime = FilterRegime.IDENTITY
    rho = make_rho_ab(params)
    ia = tensor_product(I2, filt.matrix)
    success = float(np.real(np.trace(ia @ rho @ ia.conj().T)))
    return FilterSolution(f_star, filt, success, regime)


def _deterministic_average_f(state: np.ndarray, filter_matrix: np.ndarray) -> tuple[float, float]:
    """Average singlet fraction of filter-then-fallback and its success probability.

    The success branch contributes its unnormalized best overlap (linear in the
    filtered matrix); the failure branch contributes (1-q)/2."""
    ia = tensor_product(I2, filter_matrix)
    filtered = ia @ state @ ia.conj().T
    q = float(np.real(np.trace(filtered)))
    m_real = np.real(magic_overlap_matrix(filtered))
    best = float(np.linalg.eigvalsh((m_real + m_real.T) / 2)[-1])
    return best + (1 - q) / 2, q


def optimal_filter_numeric(
    state: np.ndarray, budget: int = 10_000, seed: int = 0
) -> FilterSolution:
    """Search oracle for the filtering protocol on an arbitrary 4x4 state.

    Grid over diagonal filters in [0,1]^2, golden-section refinement per
    coordinate, then dense random-restart polishing, all within `budget`
    objective evaluations. `converged` is False when the budget ran out
    while the last stage was still improving."""
    state = np.asarray(state, dtype=complex)
    if state.shape != (4, 4):
        raise ValueError(f"expected a 4x4 density operator, got shape {state.shape}")

    evals = 0
    best_val, best_filter, best_q = -np.inf, I2.copy(), 1.0

    def evaluate(a_mat: np.ndarray) -> float:
        nonlocal evals, best_val, best_filter, best_q
        evals += 1
        val, q = _deterministic_average_f(state, a_mat)
        if val > best_val:
            best_val, best_filter, best_q = val, a_mat.copy(), q
        return val

    # Stage 1: coarse grid over diagonal filters.
    grid = np.linspace(0.0, 1.0, 26)
    for alpha in grid:
        for beta in grid:
            if evals >= budget:
                break
            evaluate(np.diag([alpha, beta]).astype(complex))

    # Stage 2: per-coordinate bounded refinement around the best diagonal.
    stage2_start = best_val
    diag = np.real(np.diag(best_filter)).copy()
    for sweep in range(6):
        if evals >= budget:
            break
        for coord in (0, 1):
            span = 0.05 * 0.5**sweep

            def negated(v, coord=coord):
                trial = diag.copy()
                trial[coord] = v
                return -evaluate(np.diag(trial).astype(complex))

            res = minimize_scalar(
                negated,
                bounds=(max(0.0, diag[coord] - span), min(1.0, diag[coord] + span)),
                method="bounded",
                options={"xatol": 1e-10},
            )
            if -res.fun >= best_val - 1e-15:
                diag[coord] = float(res.x)
    stage2_gain = best_val - stage2_start

    # Stage 3: dense complex filters, random restarts with simplex polish.
    def dense_filter(vec: np.ndarray) -> np.ndarray:
        m = (vec[:4] + 1j * vec[4:]).reshape(2, 2)
        top = np.linalg.svd(m, compute_uv=False)[0]
        return m / max(1.0, top)

    rng = np.random.default_rng(seed)
    stage3_start = best_val
    restarts = [np.concatenate([np.real(best_filter).ravel(), np.imag(best_filter).ravel()])]
    restarts += [rng.standard_normal(8) for _ in range(3)]
    for x0 in restarts:
        if evals >= budget - 50:
            break
        minimize(
            lambda v: -evaluate(dense_filter(v)),
            x0,
            method="Nelder-Mead",
            options={"maxfev": min(250, budget - evals), "fatol": 1e-12, "xatol": 1e-8},
        )
    stage3_gain = best_val - stage3_start

    converged = evals < budget or max(stage2_gain, stage3_gain) < 1e-9
    regime = (
        FilterRegime.IDENTITY
        if np.abs(best_filter - I2).max() < 1e-6
        else FilterRegime.FILTERING
    )
    if regime is FilterRegime.IDENTITY:
        best_filter = I2.copy()
    return FilterSolution(best_val, LocalFilter(best_filter), best_q, regime, converged)


def apply_tp_filter_ab(params: FamilyParams) -> np.ndarray:
    """Deterministically filtered AB state: success branch plus |01><01| fallback."""
    sol = optimal_filter_closed(params)
    rho = make_rho_ab(params)
    ia = tensor_product(I2, sol.filter.matrix)
    success = ia @ rho @ ia.conj().T
    q = float(np.real(np.trace(success)))
    ket01 = np.array([0, 1, 0, 0], dtype=complex)
    return validate_density(success + (1 - q) * projector(ket01))


def apply_tp_filter_bc(params: FamilyParams) -> np.ndarray:
    """Mirror of apply_tp_filter_ab: filter on the first factor, |10><10| fallback."""
    sol = optimal_filter_closed(params)
    rho = make_rho_bc(params)
    ai = tensor_product(sol.filter.matrix, I2)
    success = ai @ rho @ ai.conj().T
    q = float(np.real(np.trace(success)))
    ket10 = np.array([0, 0, 1, 0], dtype=complex)
    return validate_density(success + (1 - q) * projector(ket10))
