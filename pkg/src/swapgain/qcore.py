"""Dense complex-matrix foundation: tensor products, partial trace/transpose,
Hermitian eigendecomposition, density-operator validation.

Index convention: subsystem 0 is the leftmost tensor factor and the
slowest-varying index, so two-qubit kets read left-to-right as |q0 q1>.
All matrices are complex128 numpy arrays.
"""

from __future__ import annotations

import numpy as np

HERMITIAN_ATOL = 1e-10
TRACE_ATOL = 1e-8
EIG_FLOOR = -1e-9

I2 = np.eye(2, dtype=complex)
I4 = np.eye(4, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)


def dag(m: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return m.conj().T


def projector(ket: np.ndarray) -> np.ndarray:
    """|ket><ket| as a dense matrix."""
    v = np.asarray(ket, dtype=complex).ravel()
    return np.outer(v, v.conj())


def is_hermitian(m: np.ndarray, atol: float = HERMITIAN_ATOL) -> bool:
    return bool(np.abs(m - m.conj().T).max() <= atol)


def tensor_product(lhs: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    """Kronecker product with lhs as the slow (leftmost) index:
    (lhs (x) rhs)[(i*r2+k),(j*c2+l)] = lhs[i,j]*rhs[k,l]."""
    return np.kron(np.asarray(lhs, dtype=complex), np.asarray(rhs, dtype=complex))


def partial_trace(state: np.ndarray, dims, keep) -> np.ndarray:
    """Reduced matrix on the kept subsystems, tensor order preserved.

    Args:
        state: square matrix on the full tensor-product space.
        dims: dimension of each subsystem, slowest factor first.
        keep: indices of the subsystems to retain (any iterable).
    """
    state = np.asarray(state, dtype=complex)
    dims = tuple(int(d) for d in dims)
    n = len(dims)
    if int(np.prod(dims)) != state.shape[0] or state.shape[0] != state.shape[1]:
        raise ValueError(
            f"dims {dims} do not match matrix shape {state.shape}"
        )
    keep = sorted(set(keep))
    if any(k < 0 or k >= n for k in keep):
        raise ValueError(f"keep indices {keep} out of range for {n} subsystems")
    drop = [i for i in range(n) if i not in keep]
    t = state.reshape(dims + dims)
    nsub = n
    for ax in sorted(drop, reverse=True):
        t = np.trace(t, axis1=ax, axis2=ax + nsub)
        nsub -= 1
    d_keep = int(np.prod([dims[i] for i in keep])) if keep else 1
    return t.reshape(d_keep, d_keep)


def partial_transpose(state: np.ndarray, dims, subsystem: int) -> np.ndarray:
    """Transpose applied to one factor of a bipartite matrix; an involution."""
    state = np.asarray(state, dtype=complex)
    d1, d2 = (int(d) for d in dims)
    if d1 * d2 != state.shape[0] or state.shape[0] != state.shape[1]:
        raise ValueError(f"dims ({d1},{d2}) do not match matrix shape {state.shape}")
    if subsystem not in (0, 1):
        raise ValueError("subsystem must be 0 or 1")
    t = state.reshape(d1, d2, d1, d2)
    if subsystem == 0:
        t = t.transpose(2, 1, 0, 3)
    else:
        t = t.transpose(0, 3, 2, 1)
    return t.reshape(d1 * d2, d1 * d2)


def hermitian_eigensystem(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (descending) and orthonormal eigenvector columns of a
    Hermitian matrix. Raises ValueError on non-Hermitian input."""
    m = np.asarray(m, dtype=complex)
    if not is_hermitian(m):
        raise ValueError("matrix is not Hermitian within 1e-10")
    vals, vecs = np.linalg.eigh(m)
    order = np.argsort(vals)[::-1]
    return vals[order], vecs[:, order]


def validate_density(m: np.ndarray) -> np.ndarray:
    """Check the density-operator invariants and return the cleaned matrix.

    Eigenvalues in [-1e-9, 0) are clamped to 0 and the matrix renormalized
    to unit trace. Violations raise ValueError naming the invariant.
    """
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"density operator must be square, got shape {m.shape}")
    if not is_hermitian(m):
        raise ValueError("density operator is not Hermitian within 1e-10")
    tr = m.trace()
    if abs(tr - 1.0) > TRACE_ATOL:
        raise ValueError(f"density operator trace {tr} deviates from 1 by more than 1e-8")
    vals, vecs = np.linalg.eigh(m)
    if vals.min() < EIG_FLOOR:
        raise ValueError(
            f"density operator has eigenvalue {vals.min():.3e} below the -1e-9 floor"
        )
    if vals.min() >= 0.0:
        return m
    clamped = np.clip(vals, 0.0, None)
    cleaned = (vecs * clamped) @ vecs.conj().T
    return cleaned / cleaned.trace()
