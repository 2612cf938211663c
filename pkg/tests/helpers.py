"""Shared random-state generators for the test suite."""

import numpy as np


def random_density(rng, dim=4):
    """Ginibre-induced random mixed state."""
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    m = g @ g.conj().T
    return m / np.trace(m)


def random_unitary(rng, dim=2):
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(g)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_kraus_channel(rng, env_dim=4):
    """Random single-qubit CPTP map via a Haar-ish Stinespring isometry."""
    g = rng.standard_normal((2 * env_dim, 2)) + 1j * rng.standard_normal((2 * env_dim, 2))
    isometry, _ = np.linalg.qr(g)
    return [isometry[2 * e : 2 * e + 2, :] for e in range(env_dim)]


def choi_from_kraus(kraus):
    choi = np.zeros((4, 4), dtype=complex)
    basis = np.eye(2, dtype=complex)
    for i in range(2):
        for j in range(2):
            e_ij = np.outer(basis[i], basis[j].conj())
            out = sum(k @ e_ij @ k.conj().T for k in kraus)
            choi += np.kron(e_ij, out) / 2
    return choi
