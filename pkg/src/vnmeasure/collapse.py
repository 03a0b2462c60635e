"""Projective collapse on the detector qubit and the energy bookkeeping around it."""
from dataclasses import dataclass

import numpy as np

from .dynamics import evolve
from .errors import DegenerateState, DimensionMismatch, NotHermitian, NotQND, ProbabilityLeak
from .linalg import as_matrix, commutator, is_hermitian, max_norm, tensor_product
from .model import DensityMatrix, PureState, expectation
from .units import to_h

PROB_FLOOR = 1e-12
QND_TOL = 1e-10


@dataclass(frozen=True)
class CollapseOutcome:
    branch: int
    probability: float
    post_state: PureState
    branch_energy: float = 0.0


@dataclass(frozen=True)
class EnergyLedger:
    """Energy record of one collapse, internal units (hbar = 1).

    ``cross`` is the interference part of the pre-collapse expectation,
    evaluated directly from the off-diagonal branch overlaps, so
    ``e_pre == e_post + cross`` is a genuine identity check.
    """

    e_pre: float
    e_post: float
    cross: float
    outcomes: tuple = ()

    @property
    def delta(self):
        return self.e_post - self.e_pre

    def in_h(self):
        return {
            "e_pre_h": to_h(self.e_pre),
            "e_post_h": to_h(self.e_post),
            "cross_h": to_h(self.cross),
            "delta_h": to_h(self.delta),
        }


def branch_projectors(pointer):
    return [tensor_product(np.eye(2), pointer.projector(j)) for j in range(2)]


def project(state, pointer, prob_floor=PROB_FLOOR):
    psi = state.amplitudes if isinstance(state, PureState) else np.asarray(state, dtype=complex)
    if psi.shape != (4,):
        raise DimensionMismatch(f"collapse needs a 4-dim state, got {psi.shape}")
    outcomes = []
    for j, proj in enumerate(branch_projectors(pointer)):
        branch = proj @ psi
        p = float(np.vdot(branch, branch).real)
        if p < prob_floor:
            continue
        outcomes.append(CollapseOutcome(j, p, PureState(branch / np.sqrt(p))))
    if not outcomes:
        raise DegenerateState("no collapse branch above the probability floor")
    return outcomes


def ensemble_density(outcomes, tol=1e-10):
    total = sum(o.probability for o in outcomes)
    if abs(total - 1) > tol:
        raise ProbabilityLeak(f"branch probabilities sum to {total!r}")
    rho = sum(o.probability * o.post_state.projector() for o in outcomes)
    return DensityMatrix(rho)


def cross_term(state, hamiltonian, pointer):
    """Interference contribution sum_{j != k} <P_j Psi|H|P_k Psi>."""
    psi = state.amplitudes if isinstance(state, PureState) else np.asarray(state, dtype=complex)
    h = as_matrix(hamiltonian)
    parts = [proj @ psi for proj in branch_projectors(pointer)]
    total = 0j
    for j, a in enumerate(parts):
        for k, b in enumerate(parts):
            if j != k:
                total += np.vdot(a, h @ b)
    return float(total.real)


def ledger_for_state(state, hamiltonian, pointer, prob_floor=PROB_FLOOR):
    outcomes = [
        CollapseOutcome(o.branch, o.probability, o.post_state, expectation(o.post_state, hamiltonian))
        for o in project(state, pointer, prob_floor)
    ]
    e_pre = expectation(state, hamiltonian)
    e_post = sum(o.probability * o.branch_energy for o in outcomes)
    return EnergyLedger(e_pre, float(e_post), cross_term(state, hamiltonian, pointer), tuple(outcomes))


def energy_balance(scheme, t_collapse):
    """Evolve to ``t_collapse``, collapse in the scheme's pointer basis, and
    compare the energy expectation before and after."""
    state = evolve(scheme, t_collapse)
    return ledger_for_state(state, scheme.hamiltonian, scheme.pointer)


def cycle_ledger(scheme, t_collapse, n_cycles):
    """Cumulative energy change over ``n_cycles`` of evolve -> collapse -> reset.

    The reset back to the initial state is an ideal external step booked at
    zero scheme energy, so each cycle contributes the same collapse delta.
    """
    if n_cycles < 0:
        raise ValueError("n_cycles must be non-negative")
    if n_cycles == 0:
        return 0.0
    return n_cycles * energy_balance(scheme, t_collapse).delta


def qnd_extend(h_sp, h_env, h_int, tol=QND_TOL):
    """Total Hamiltonian of system+probe (4) coupled to a one-qubit environment.

    Rejects couplings that do not commute with the system+probe Hamiltonian.
    """
    h_sp, h_env, h_int = as_matrix(h_sp), as_matrix(h_env), as_matrix(h_int)
    if h_sp.shape != (4, 4) or h_env.shape != (2, 2) or h_int.shape != (8, 8):
        raise DimensionMismatch("expected 4x4, 2x2 and 8x8 matrices")
    for name, m in (("H_sp", h_sp), ("H_env", h_env), ("H_int", h_int)):
        if not is_hermitian(m, 1e-10):
            raise NotHermitian(f"{name} is not Hermitian")
    lifted = tensor_product(h_sp, np.eye(2))
    norm = max_norm(commutator(lifted, h_int))
    if norm > tol:
        raise NotQND(norm)
    return lifted + tensor_product(np.eye(4), h_env) + h_int
