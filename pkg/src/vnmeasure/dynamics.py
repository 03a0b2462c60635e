"""Unitary evolution of a scheme and detection of premeasurement instants."""
from dataclasses import dataclass
from itertools import permutations

import numpy as np

from .errors import DimensionMismatch
from .linalg import tensor_product, unitary_exp
from .model import PureState


@dataclass(frozen=True)
class CorrelationReport:
    """System/pointer amplitude table c[i, j] = <phi_i (x) psi'_j | Psi>."""

    coefficient_matrix: np.ndarray
    is_premeasurement: bool
    pairing: tuple | None  # pairing[i] = pointer index correlated with phi_i
    score: float


def evolve(scheme, t):
    if t < 0:
        raise ValueError(f"evolution time must be non-negative, got {t}")
    psi = unitary_exp(scheme.hamiltonian, t) @ scheme.initial_state.amplitudes
    # renormalize roundoff only; a real norm defect would be an error upstream
    return PureState(psi / np.linalg.norm(psi))


def _coefficients(psi, system_basis, pointer):
    c = np.empty((2, 2), dtype=complex)
    for i, phi in enumerate(system_basis):
        for j, chi in enumerate(pointer.vectors):
            c[i, j] = np.vdot(tensor_product(phi, chi), psi)
    return c


def correlation_report(state, system_basis, pointer, tol=1e-6):
    """Check whether ``state`` pairs orthogonal system and pointer states.

    Premeasurement means the magnitude table has permutation support: the
    on-pattern entries are >= tol and every other entry is < tol. Unequal
    branch weights are allowed.
    """
    psi = state.amplitudes if isinstance(state, PureState) else np.asarray(state, dtype=complex)
    if psi.shape != (4,):
        raise DimensionMismatch(f"correlation needs a 4-dim state, got {psi.shape}")
    c = _coefficients(psi, system_basis, pointer)
    mag = np.abs(c)
    mass = mag**2

    best, best_off = None, np.inf
    # identity is tried first so it wins ties
    for perm in permutations(range(2)):
        on = np.zeros((2, 2), dtype=bool)
        on[range(2), perm] = True
        off = float(mass[~on].sum())
        if off < best_off - 1e-15:
            best, best_off = perm, off
    score = float(np.clip(1.0 - np.sqrt(best_off), 0.0, 1.0))

    pairing = None
    for perm in permutations(range(2)):
        on = np.zeros((2, 2), dtype=bool)
        on[range(2), perm] = True
        if (mag[on] >= tol).all() and (mag[~on] < tol).all():
            pairing = tuple(int(p) for p in perm)
            break
    return CorrelationReport(c, pairing is not None, pairing, score)


def time_grid(t_start, t_end, step):
    if step <= 0:
        raise ValueError("step must be positive")
    n = int(np.ceil((t_end - t_start) / step - 1e-9))
    return t_start + step * np.arange(max(n, 0))


def scan_premeasurement(scheme, t_start, t_end, step, tol=1e-6):
    """Grid scan of [t_start, t_end) for premeasurement instants.

    Runs of consecutive flagged grid points are coalesced; each run is
    reported once, at its midpoint, with the report evaluated there.
    """
    grid = time_grid(t_start, t_end, step)
    flags = []
    for t in grid:
        rep = correlation_report(evolve(scheme, t), scheme.system_basis, scheme.pointer, tol)
        flags.append(rep.is_premeasurement)

    hits, k = [], 0
    while k < len(grid):
        if not flags[k]:
            k += 1
            continue
        start = k
        while k + 1 < len(grid) and flags[k + 1]:
            k += 1
        t_mid = 0.5 * (grid[start] + grid[k])
        rep = correlation_report(evolve(scheme, t_mid), scheme.system_basis, scheme.pointer, tol)
        hits.append((float(t_mid), rep))
        k += 1
    return hits
