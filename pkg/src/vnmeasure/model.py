"""States, pointer bases, Pauli-tensor algebra and the canonical two-qubit scheme."""
from dataclasses import dataclass, field
from itertools import product

import numpy as np

from .errors import DimensionMismatch, NotHermitian
from .linalg import PAULI, as_matrix, dagger, is_hermitian, tensor_product
from .units import PLANCK_H

PAULI_LABELS = ("I", "X", "Y", "Z")

# Propagator over one tick for the canonical scheme, basis
# (phi1 psi0, phi1 psi1, phi2 psi0, phi2 psi1).
STANDARD_UNITARY = np.array(
    [
        [0, 0, 1, 0],
        [0, 0, 0, 1],
        [0, -1j, 0, 0],
        [1j, 0, 0, 0],
    ],
    dtype=complex,
)

# Propagator after 3 + 4k ticks.
STANDARD_UNITARY_T3 = np.array(
    [
        [0, 0, 0, -1j],
        [0, 0, 1j, 0],
        [1, 0, 0, 0],
        [0, 1, 0, 0],
    ],
    dtype=complex,
)

# Hamiltonian generating STANDARD_UNITARY, in units of h/8.
STANDARD_HAMILTONIAN_H8 = np.array(
    [
        [1, -1j, -1 + 1j, -1 + 1j],
        [1j, 1, 1 - 1j, -1 + 1j],
        [-1 - 1j, 1 + 1j, 1, -1j],
        [-1 - 1j, -1 - 1j, 1j, 1],
    ],
    dtype=complex,
)


def standard_hamiltonian():
    return STANDARD_HAMILTONIAN_H8 * (PLANCK_H / 8)


@dataclass(frozen=True)
class PureState:
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        norm = np.linalg.norm(amps)
        if abs(norm - 1) > 1e-10:
            raise ValueError(f"state norm {norm!r} is not 1")
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def normalized(cls, amplitudes):
        amps = np.asarray(amplitudes, dtype=complex).reshape(-1)
        norm = np.linalg.norm(amps)
        if norm == 0:
            raise ValueError("cannot normalize the zero vector")
        return cls(amps / norm)

    @property
    def dim(self):
        return self.amplitudes.shape[0]

    def projector(self):
        return np.outer(self.amplitudes, self.amplitudes.conj())


@dataclass(frozen=True)
class DensityMatrix:
    matrix: np.ndarray

    def __post_init__(self):
        m = as_matrix(self.matrix)
        if not is_hermitian(m, 1e-10):
            raise NotHermitian("density matrix is not Hermitian")
        tr = np.trace(m).real
        if abs(tr - 1) > 1e-10:
            raise ValueError(f"density matrix trace {tr!r} is not 1")
        if np.linalg.eigvalsh((m + dagger(m)) / 2).min() < -1e-10:
            raise ValueError("density matrix has a negative eigenvalue")
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self):
        return self.matrix.shape[0]

    def purity(self):
        return float(np.trace(self.matrix @ self.matrix).real)


@dataclass(frozen=True)
class PointerBasis:
    """Orthonormal detector basis psi0', psi1' set by Bloch angles.

    psi0' = cos(theta/2) psi0 + e^{i phi} sin(theta/2) psi1 and psi1' is its
    orthogonal partner -e^{-i phi} sin(theta/2) psi0 + cos(theta/2) psi1.
    """

    vectors: tuple
    theta: float = 0.0
    phi: float = 0.0

    @classmethod
    def from_angles(cls, theta=0.0, phi=0.0):
        c, s = np.cos(theta / 2), np.sin(theta / 2)
        v0 = np.array([c, np.exp(1j * phi) * s], dtype=complex)
        v1 = np.array([-np.exp(-1j * phi) * s, c], dtype=complex)
        return cls((v0, v1), float(theta), float(phi))

    @classmethod
    def from_vectors(cls, v0, v1):
        v0 = np.asarray(v0, dtype=complex)
        v1 = np.asarray(v1, dtype=complex)
        v0, v1 = v0 / np.linalg.norm(v0), v1 / np.linalg.norm(v1)
        if abs(np.vdot(v0, v1)) > 1e-12:
            raise ValueError("pointer vectors are not orthogonal")
        theta = 2 * np.arccos(min(1.0, abs(v0[0])))
        phi = float(np.angle(v0[1]) - np.angle(v0[0])) if abs(v0[1]) > 0 else 0.0
        return cls((v0, v1), float(theta), phi)

    def projector(self, j):
        v = self.vectors[j]
        return np.outer(v, v.conj())


CANONICAL_BASIS = (np.array([1, 0], dtype=complex), np.array([0, 1], dtype=complex))


@dataclass(frozen=True)
class MeasurementScheme:
    hamiltonian: np.ndarray
    initial_state: PureState
    pointer: PointerBasis = field(default_factory=PointerBasis.from_angles)
    system_basis: tuple = CANONICAL_BASIS
    collapse_times: tuple = (1.0,)

    def __post_init__(self):
        h = as_matrix(self.hamiltonian)
        if not is_hermitian(h, 1e-10):
            raise NotHermitian("scheme Hamiltonian is not Hermitian")
        if h.shape[0] != self.initial_state.dim:
            raise DimensionMismatch("Hamiltonian and initial state dimensions differ")
        object.__setattr__(self, "hamiltonian", h)


def build_standard_scheme():
    phi1, phi2 = CANONICAL_BASIS
    psi0 = CANONICAL_BASIS[0]
    initial = PureState(tensor_product((phi1 + phi2) / np.sqrt(2), psi0))
    return MeasurementScheme(
        hamiltonian=standard_hamiltonian(),
        initial_state=initial,
        pointer=PointerBasis.from_angles(0.0, 0.0),
        system_basis=CANONICAL_BASIS,
        collapse_times=(1.0,),
    )


def expectation(state, a):
    """<psi|A|psi> for a PureState (or vector), tr(rho A) for a DensityMatrix."""
    a = as_matrix(a)
    if not is_hermitian(a, 1e-10):
        raise NotHermitian("observable is not Hermitian")
    if isinstance(state, DensityMatrix):
        if state.dim != a.shape[0]:
            raise DimensionMismatch(f"state dim {state.dim} vs operator dim {a.shape[0]}")
        value = np.trace(state.matrix @ a)
    else:
        psi = state.amplitudes if isinstance(state, PureState) else np.asarray(state, dtype=complex)
        if psi.shape[0] != a.shape[0]:
            raise DimensionMismatch(f"state dim {psi.shape[0]} vs operator dim {a.shape[0]}")
        value = np.vdot(psi, a @ psi)
    scale = max(1.0, float(np.abs(a).max()))
    assert abs(value.imag) <= 1e-10 * scale, f"imaginary expectation residue {value.imag}"
    return float(value.real)


@dataclass
class PauliDecomposition:
    """Real coefficients of H over sigma_a (x) sigma_b, a/b in I, X, Y, Z.

    ``coefficients[a, b]`` is indexed in PAULI_LABELS order.
    """

    coefficients: np.ndarray

    def __getitem__(self, label):
        a, b = label
        return float(self.coefficients[PAULI_LABELS.index(a), PAULI_LABELS.index(b)])

    def as_dict(self, tol=None):
        """Label -> coefficient; with ``tol``, only terms with |c| > tol."""
        out = {}
        for (i, a), (j, b) in product(enumerate(PAULI_LABELS), repeat=2):
            c = float(self.coefficients[i, j])
            if tol is None or abs(c) > tol:
                out[a + b] = c
        return out

    @classmethod
    def from_dict(cls, coeffs):
        c = np.zeros((4, 4))
        for label, value in coeffs.items():
            if len(label) != 2 or any(ch not in PAULI_LABELS for ch in label):
                raise KeyError(f"bad Pauli label {label!r}")
            c[PAULI_LABELS.index(label[0]), PAULI_LABELS.index(label[1])] = value
        return cls(c)


def _pauli_pair(a, b):
    return tensor_product(PAULI[a], PAULI[b])


def pauli_decompose(h):
    h = as_matrix(h)
    if h.shape != (4, 4):
        raise DimensionMismatch(f"expected a 4x4 matrix, got {h.shape}")
    if not is_hermitian(h, 1e-10):
        raise NotHermitian("cannot Pauli-decompose a non-Hermitian matrix")
    c = np.empty((4, 4), dtype=complex)
    for (i, a), (j, b) in product(enumerate(PAULI_LABELS), repeat=2):
        c[i, j] = np.trace(_pauli_pair(a, b) @ h) / 4
    assert np.abs(c.imag).max() <= 1e-10
    return PauliDecomposition(c.real.copy())


def pauli_compose(d):
    h = np.zeros((4, 4), dtype=complex)
    for (i, a), (j, b) in product(enumerate(PAULI_LABELS), repeat=2):
        if d.coefficients[i, j] != 0:
            h += d.coefficients[i, j] * _pauli_pair(a, b)
    return h


def split_terms(d):
    """Group the expansion into (system-local, detector-local, interaction).

    The identity-identity constant goes with the system term.
    """
    system = np.zeros((4, 4), dtype=complex)
    detector = np.zeros((4, 4), dtype=complex)
    interaction = np.zeros((4, 4), dtype=complex)
    for (i, a), (j, b) in product(enumerate(PAULI_LABELS), repeat=2):
        term = d.coefficients[i, j] * _pauli_pair(a, b)
        if b == "I":
            system += term
        elif a == "I":
            detector += term
        else:
            interaction += term
    return system, detector, interaction

