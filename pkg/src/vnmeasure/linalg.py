"""Small dense complex matrix algebra (dim <= 8).

Matrices are plain ``numpy`` complex arrays. Normal matrices are diagonalized
through Hermitian eigenproblems only; the exponential and the principal
logarithm are built on top of that spectral decomposition.
"""
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .errors import DimensionMismatch, NotNormal
from .units import HBAR

# sigma_0..sigma_3 in the order I, X, Y, Z
PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

# generic weight for the Hermitian pencil C + w*S (avoids accidental ties)
_PENCIL_WEIGHT = 0.5772156649015329
_CLUSTER_TOL = 1e-7
_BRANCH_TOL = 1e-12


@dataclass(frozen=True)
class SpectralDecomposition:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray  # orthonormal columns

    def reconstruct(self):
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def as_matrix(a):
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {m.shape}")
    return m


def dagger(a):
    return np.asarray(a).conj().T


def is_unitary(a, tol=1e-10):
    m = as_matrix(a)
    return float(np.abs(dagger(m) @ m - np.eye(m.shape[0])).max()) <= tol


def is_hermitian(a, tol=1e-10):
    m = as_matrix(a)
    return float(np.abs(m - dagger(m)).max()) <= tol


def commutator(a, b):
    a, b = as_matrix(a), as_matrix(b)
    if a.shape != b.shape:
        raise DimensionMismatch(f"commutator of {a.shape} and {b.shape}")
    return a @ b - b @ a


def tensor_product(*factors):
    """Kronecker product of matrices or vectors.

    The leftmost factor is the most significant index, so for a system
    factor and a detector factor the basis order is
    (s0,d0), (s0,d1), (s1,d0), (s1,d1).
    """
    out = np.asarray(factors[0], dtype=complex)
    for f in factors[1:]:
        out = np.kron(out, np.asarray(f, dtype=complex))
    return out


def _split_clusters(values, tol):
    """Index groups of sorted ``values`` whose consecutive gaps are <= tol."""
    groups, current = [], [0]
    for k in range(1, len(values)):
        if values[k] - values[k - 1] <= tol:
            current.append(k)
        else:
            groups.append(current)
            current = [k]
    groups.append(current)
    return groups


def _refine(basis, hermitians):
    """Diagonalize the first Hermitian restricted to span(basis), recursing on
    degenerate sub-blocks with the remaining ones."""
    if basis.shape[1] == 1 or not hermitians:
        return basis
    first, rest = hermitians[0], hermitians[1:]
    w, v = np.linalg.eigh(dagger(basis) @ first @ basis)
    rotated = basis @ v
    blocks = [_refine(rotated[:, g], rest) for g in _split_clusters(w, _CLUSTER_TOL)]
    return np.hstack(blocks)


def _orthonormalize(v):
    q, r = np.linalg.qr(v)
    # keep the column phases of v
    phases = np.diag(r).copy()
    phases /= np.where(np.abs(phases) > 0, np.abs(phases), 1.0)
    return q * phases


def spectral_decompose(a, kind: Literal["unitary", "hermitian"], tol=1e-10):
    """Eigen-decompose a unitary or Hermitian matrix using Hermitian solvers.

    A unitary U is split into the commuting Hermitian pair
    C = (U + U^dag)/2 and S = (U - U^dag)/2i. A generic combination C + w*S
    is diagonalized first; any cluster left degenerate is then resolved by
    diagonalizing C and S inside that subspace.
    """
    m = as_matrix(a)
    if kind == "hermitian":
        if not is_hermitian(m, tol):
            raise NotNormal("matrix is not Hermitian within tolerance")
        h = (m + dagger(m)) / 2
        w, v = np.linalg.eigh(h)
        return SpectralDecomposition(w.astype(complex), v)
    if kind != "unitary":
        raise ValueError(f"unknown kind {kind!r}")
    if not is_unitary(m, tol):
        raise NotNormal("matrix is not unitary within tolerance")

    c = (m + dagger(m)) / 2
    s = (m - dagger(m)) / 2j
    v = _refine(np.eye(m.shape[0], dtype=complex), [c + _PENCIL_WEIGHT * s, c, s])
    v = _orthonormalize(v)
    lam = np.einsum("ij,ik,kj->j", v.conj(), m, v)
    return SpectralDecomposition(lam / np.abs(lam), v)


def unitary_exp(h, t=1.0):
    """exp(-i H t / hbar) for Hermitian H, computed spectrally."""
    dec = spectral_decompose(h, "hermitian")
    energies = dec.eigenvalues.real
    v = dec.eigenvectors
    return (v * np.exp(-1j * energies * t / HBAR)) @ dagger(v)


def principal_log_hamiltonian(u):
    """Hermitian H with exp(-i H / hbar) = U and energies in (-pi*hbar, pi*hbar].

    Each eigenvalue exp(i*theta) of U contributes energy -hbar*theta. The
    energy cut is closed on the positive side, so an eigenvalue of -1 gives
    +pi*hbar (i.e. +h/2).
    """
    dec = spectral_decompose(u, "unitary")
    theta = np.angle(dec.eigenvalues)
    energies = -theta
    # -theta lands at -pi for theta = +pi; fold onto +pi
    energies = np.where(energies <= -np.pi + _BRANCH_TOL, energies + 2 * np.pi, energies)
    energies = energies * HBAR
    v = dec.eigenvectors
    h = (v * energies) @ dagger(v)
    return (h + dagger(h)) / 2


def max_norm(a):
    return float(np.abs(np.asarray(a)).max())
