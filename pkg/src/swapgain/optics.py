"""Truncated Fock-space simulation of the heralded linear-optics experiment:
two single-photon entangled sources, loss beam splitters realizing amplitude
damping, a 50:50 interference beam splitter, and photon-number detection.

Logical qubits use the single-rail encoding (0/1 photons in a mode). The
sources emit exactly two photons in total, so a per-mode cutoff of 2 is exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb, factorial, sqrt

import numpy as np

from .entfrac import FamilyParams
from .qcore import validate_density

DEFAULT_MODES = ("a", "b1", "b2", "c", "b3", "b4")

# Detector pattern on (b1, b2) heralding each Bell outcome of the swap under
# the pinned beam-splitter phase convention.
HERALD_PSI_MINUS = (1, 0)
HERALD_PSI_PLUS = (0, 1)

DETECTION_PATTERNS = ((0, 0), (1, 0), (0, 1), (2, 0), (0, 2), (1, 1))


@dataclass(frozen=True)
class ModeRegister:
    mode_labels: tuple[str, ...] = DEFAULT_MODES
    cutoff: int = 2

    def __post_init__(self):
        if len(set(self.mode_labels)) != len(self.mode_labels):
            raise ValueError("mode labels must be unique")
        if self.cutoff < 1:
            raise ValueError("cutoff must be at least 1")

    def index(self, label: str) -> int:
        return self.mode_labels.index(label)


@dataclass(frozen=True)
class FockVector:
    """Pure state over a bosonic register: occupation tuple -> amplitude."""

    register: ModeRegister
    amplitudes: dict[tuple[int, ...], complex]

    def __post_init__(self):
        n = len(self.register.mode_labels)
        for key in self.amplitudes:
            if len(key) != n:
                raise ValueError(f"occupation {key} does not match {n} modes")
            if any(o < 0 or o > self.register.cutoff for o in key):
                raise ValueError(f"occupation {key} exceeds the cutoff")
        norm = sqrt(sum(abs(v) ** 2 for v in self.amplitudes.values()))
        if abs(norm - 1.0) > 1e-12:
            raise ValueError(f"Fock vector norm {norm} deviates from 1")


@dataclass(frozen=True)
class BeamSplitterSpec:
    mode_pair: tuple[str, str]
    transmission: float

    def __post_init__(self):
        if not 0.0 <= self.transmission <= 1.0:
            raise ValueError(f"transmission must lie in [0, 1], got {self.transmission}")


@dataclass(frozen=True)
class DetectionEvent:
    counts: tuple[int, int]
    probability: float
    heralded_state: np.ndarray
    usable: bool = True


def loss_transmission(params: FamilyParams) -> float:
    """Transmission p*a/(1 - p(1-a)) of the loss beam splitters.

    Mathematically within [0, 1] on the family domain; clipped against
    last-bit rounding at p = 1."""
    p, a = params.p, params.a
    return min(p * a / (1 - p * (1 - a)), 1.0)


def prepare_sources(params: FamilyParams) -> FockVector:
    """Two-photon product of the AB source on (a, b1) and the BC source on
    (b2, c), vacuum elsewhere."""
    p, a = params.p, params.a
    alpha = sqrt(1 - p * (1 - a))
    beta = sqrt(p * (1 - a))
    register = ModeRegister()
    # (n_a, n_b1, n_b2, n_c, n_b3, n_b4)
    amplitudes = {
        (0, 1, 1, 0, 0, 0): alpha * alpha,
        (0, 1, 0, 1, 0, 0): alpha * -beta,
        (1, 0, 1, 0, 0, 0): -beta * alpha,
        (1, 0, 0, 1, 0, 0): beta * beta,
    }
    return FockVector(register, amplitudes)


def apply_beam_splitter(state: FockVector, spec: BeamSplitterSpec) -> FockVector:
    """Two-mode mixing with creation operators transforming as
    c1+ -> sqrt(T) c1+ + sqrt(1-T) c2+ and c2+ -> sqrt(T) c2+ - sqrt(1-T) c1+."""
    reg = state.register
    i = reg.index(spec.mode_pair[0])
    j = reg.index(spec.mode_pair[1])
    rt = sqrt(spec.transmission)
    rr = sqrt(1 - spec.transmission)
    out: dict[tuple[int, ...], complex] = {}
    for key, amp in state.amplitudes.items():
        m, n = key[i], key[j]
        base = amp / sqrt(factorial(m) * factorial(n))
        for k in range(m + 1):
            for l in range(n + 1):
                occ_i = k + l
                occ_j = m + n - k - l
                if occ_i > reg.cutoff or occ_j > reg.cutoff:
                    raise ValueError(
                        f"beam splitter output occupation ({occ_i},{occ_j}) "
                        f"exceeds the cutoff {reg.cutoff}"
                    )
                coeff = (
                    comb(m, k)
                    * comb(n, l)
                    * rt ** (k + n - l)
                    * rr ** (m - k + l)
                    * (-1) ** l
                )
                if coeff == 0.0:
                    continue
                new_key = list(key)
                new_key[i], new_key[j] = occ_i, occ_j
                new_key = tuple(new_key)
                value = base * coeff * sqrt(factorial(occ_i) * factorial(occ_j))
                out[new_key] = out.get(new_key, 0.0) + value
    out = {k: v for k, v in out.items() if v != 0.0}
    return FockVector(reg, out)


def _reduced_qubit_density(
    amplitudes: dict[tuple[int, ...], complex], register: ModeRegister, keep: tuple[str, ...]
) -> np.ndarray:
    """Partial trace of |psi><psi| onto the kept modes, read in the 0/1-photon
    single-rail encoding (kept occupations above 1 are rejected)."""
    idx = [register.index(label) for label in keep]
    other = [i for i in range(len(register.mode_labels)) if i not in idx]
    dim = 2 ** len(idx)
    groups: dict[tuple[int, ...], list[tuple[int, complex]]] = {}
    for key, amp in amplitudes.items():
        kept = [key[i] for i in idx]
        if any(o > 1 for o in kept):
            raise ValueError(f"kept mode occupation {kept} is not a single-rail qubit")
        basis_index = 0
        for o in kept:
            basis_index = 2 * basis_index + o
        env = tuple(key[i] for i in other)
        groups.setdefault(env, []).append((basis_index, amp))
    rho = np.zeros((dim, dim), dtype=complex)
    for entries in groups.values():
        vec = np.zeros(dim, dtype=complex)
        for basis_index, amp in entries:
            vec[basis_index] += amp
        rho += np.outer(vec, vec.conj())
    return rho


def run_loss_stage(state: FockVector, params: FamilyParams) -> np.ndarray:
    """Apply the two loss beam splitters (b1<->b3, b2<->b4) and trace out the
    undetected modes; 16x16 density operator on (a, b1, b2, c) qubits."""
    t = loss_transmission(params)
    state = apply_beam_splitter(state, BeamSplitterSpec(("b1", "b3"), t))
    state = apply_beam_splitter(state, BeamSplitterSpec(("b2", "b4"), t))
    rho = _reduced_qubit_density(state.amplitudes, state.register, ("a", "b1", "b2", "c"))
    return validate_density(rho)


def run_heralded_swap(params: FamilyParams) -> list[DetectionEvent]:
    """Full pipeline: sources, loss stage, 50:50 interference on (b1, b2),
    photon-number detection. Enumerates every detector pattern with its
    probability and heralded (a, c) state."""
    state = prepare_sources(params)
    t = loss_transmission(params)
    state = apply_beam_splitter(state, BeamSplitterSpec(("b1", "b3"), t))
    state = apply_beam_splitter(state, BeamSplitterSpec(("b2", "b4"), t))
    state = apply_beam_splitter(state, BeamSplitterSpec(("b1", "b2"), 0.5))
    reg = state.register
    i_b1, i_b2 = reg.index("b1"), reg.index("b2")
    events = []
    for counts in DETECTION_PATTERNS:
        sub = {
            key: amp
            for key, amp in state.amplitudes.items()
            if (key[i_b1], key[i_b2]) == counts
        }
        prob = sum(abs(v) ** 2 for v in sub.values())
        if prob > 1e-12:
            rho = _reduced_qubit_density(sub, reg, ("a", "c")) / prob
            events.append(DetectionEvent(counts, float(prob), validate_density(rho)))
        else:
            events.append(
                DetectionEvent(counts, float(prob), np.eye(4, dtype=complex) / 4, usable=False)
            )
    return events
