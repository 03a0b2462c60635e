"""Exit criteria for the build; each test records one PASS/FAIL summary line."""
import json

import numpy as np
import pytest

from vnmeasure.cli import main
from vnmeasure.collapse import cycle_ledger, energy_balance, ensemble_density, project, qnd_extend
from vnmeasure.dynamics import evolve, scan_premeasurement
from vnmeasure.errors import NotQND
from vnmeasure.linalg import PAULI, principal_log_hamiltonian, tensor_product, unitary_exp
from vnmeasure.model import (
    STANDARD_HAMILTONIAN_H8,
    STANDARD_UNITARY,
    STANDARD_UNITARY_T3,
    MeasurementScheme,
    PointerBasis,
    PureState,
    build_standard_scheme,
    expectation,
    pauli_decompose,
)
from vnmeasure.units import PLANCK_H

from conftest import random_hermitian, random_state, random_unitary

EIGHTH = PLANCK_H / 8
N_RANDOM = 250


@pytest.fixture(scope="module")
def scheme():
    return build_standard_scheme()


def test_01_evolution_to_t1(scheme, acceptance):
    err = np.abs(evolve(scheme, 1).amplitudes - np.array([1, 0, 0, 1j]) / np.sqrt(2)).max()
    assert acceptance(1, "evolution to t=1", err <= 1e-10, f"err={err:.1e}")


def test_02_log_exp_consistency(acceptance):
    h = principal_log_hamiltonian(STANDARD_UNITARY)
    err_log = np.abs(h - EIGHTH * STANDARD_HAMILTONIAN_H8).max()
    err_exp = np.abs(unitary_exp(h, 1) - STANDARD_UNITARY).max()
    ok = err_log <= 1e-10 and err_exp <= 1e-10
    assert acceptance(2, "log(U) = H and exp(-iH) = U", ok, f"err={max(err_log, err_exp):.1e}")


def test_03_pauli_decomposition(scheme, acceptance):
    coeffs = pauli_decompose(scheme.hamiltonian).as_dict()
    expected = {"II": 1, "XI": -1, "YI": -1, "IY": 1, "XY": -1, "YY": 1}
    err = max(abs(v - expected.get(k, 0) * EIGHTH) for k, v in coeffs.items())
    zeros = max(abs(v) for k, v in coeffs.items() if k not in expected)
    ok = err <= 1e-12 and zeros <= 1e-12 and len(coeffs) == 16
    assert acceptance(3, "Pauli coefficients", ok, f"err={err:.1e}")


def test_04_energy_discrepancy_at_t1(scheme, acceptance):
    ledger = energy_balance(scheme, 1.0)
    rel = abs(ledger.e_post - EIGHTH) / EIGHTH
    ok = abs(ledger.e_pre) <= 1e-10 and rel <= 1e-9 and abs(ledger.delta - EIGHTH) / EIGHTH <= 1e-9
    assert acceptance(4, "e_pre=0, e_post=h/8 at t=1", ok, f"delta={ledger.delta / PLANCK_H:.12g} h")


def test_05_exchanged_pointers_at_t3(scheme, acceptance):
    err = np.abs(unitary_exp(scheme.hamiltonian, 3) - STANDARD_UNITARY_T3).max()
    ledger = energy_balance(scheme, 3.0)
    rel = abs(ledger.e_post - EIGHTH) / EIGHTH
    ok = err <= 1e-10 and rel <= 1e-9 and abs(ledger.e_pre) <= 1e-10
    assert acceptance(5, "U(3) and e_post=h/8 at t=3", ok, f"err={err:.1e}")


def test_06_premeasurement_scan(scheme, acceptance):
    step = 1e-3
    instants = [t for t, _ in scan_premeasurement(scheme, 0.0, 4.0, step, 1e-6)]
    ok = len(instants) == 2 and abs(instants[0] - 1) <= step and abs(instants[1] - 3) <= step
    assert acceptance(6, "premeasurement instants on [0,4)", ok, f"found={instants}")


def test_07_post_measurement_rho(scheme, acceptance):
    rho = ensemble_density(project(evolve(scheme, 1), scheme.pointer)).matrix
    err = np.abs(rho - np.diag([0.5, 0, 0, 0.5])).max()
    assert acceptance(7, "rho = diag(1/2,0,0,1/2)", err <= 1e-10, f"err={err:.1e}")


def test_08_cycle_linearity(scheme, acceptance):
    errs = {n: abs(cycle_ledger(scheme, 1.0, n) - n * EIGHTH) for n in (1, 10, 100)}
    ok = all(err <= n * 1e-9 for n, err in errs.items())
    assert acceptance(8, "cycle ledger n*h/8", ok, f"max err={max(errs.values()):.1e}")


def _random_scheme(rng):
    theta, phi = rng.uniform(0, np.pi), rng.uniform(-np.pi, np.pi)
    return MeasurementScheme(
        random_hermitian(rng, 4, norm=rng.uniform(0.1, 3)),
        PureState(random_state(rng)),
        PointerBasis.from_angles(theta, phi),
    )


def test_09_property_suite(acceptance):
    rng = np.random.default_rng(20240917)
    worst = dict(flow=0.0, ledger=0.0, prob=0.0, roundtrip=0.0, commuting=0.0)
    for _ in range(N_RANDOM):
        s = _random_scheme(rng)
        e0 = expectation(s.initial_state, s.hamiltonian)
        t = rng.uniform(0, 8)
        worst["flow"] = max(worst["flow"], abs(expectation(evolve(s, t), s.hamiltonian) - e0))

        ledger = energy_balance(s, rng.uniform(0, 8))
        worst["ledger"] = max(worst["ledger"], abs(ledger.e_pre - ledger.e_post - ledger.cross))
        worst["prob"] = max(worst["prob"], abs(sum(o.probability for o in ledger.outcomes) - 1))

        dim = rng.choice([2, 4, 8])
        h = random_hermitian(rng, dim, norm=0.99 * np.pi)
        u = random_unitary(rng, dim)
        worst["roundtrip"] = max(
            worst["roundtrip"],
            np.abs(principal_log_hamiltonian(unitary_exp(h, 1)) - h).max(),
            np.abs(unitary_exp(principal_log_hamiltonian(u), 1) - u).max(),
        )

        p = s.pointer
        a, b, c = (random_hermitian(rng, 2) for _ in range(3))
        hc = tensor_product(a, np.eye(2)) + tensor_product(b, p.projector(0)) + tensor_product(c, p.projector(1))
        sc = MeasurementScheme(hc, s.initial_state, p)
        worst["commuting"] = max(worst["commuting"], abs(energy_balance(sc, rng.uniform(0, 8)).delta))

    tols = dict(flow=1e-9, ledger=1e-9, prob=1e-10, roundtrip=1e-8, commuting=1e-9)
    ok = all(worst[k] <= tols[k] for k in tols)
    detail = " ".join(f"{k}={v:.1e}" for k, v in worst.items())
    assert acceptance(9, f"property suite ({N_RANDOM} cases each)", ok, detail)


def test_10_qnd_demo(scheme, acceptance):
    h = scheme.hamiltonian
    total = qnd_extend(h, 0.5 * PAULI["Z"], tensor_product(h, PAULI["X"]))
    probe = tensor_product(h, np.eye(2))
    psi0 = tensor_product(scheme.initial_state.amplitudes, np.array([0.6, 0.8j]))
    e0 = expectation(psi0, probe)
    drift = max(
        abs(expectation(unitary_exp(total, t) @ psi0, probe) - e0) for t in np.round(np.arange(0, 4.001, 0.01), 10)
    )
    rejected = False
    try:
        qnd_extend(h, np.zeros((2, 2)), tensor_product(PAULI["X"], np.eye(2), PAULI["X"]))
    except NotQND:
        rejected = True
    ok = drift <= 1e-9 and rejected
    assert acceptance(10, "QND conservation and rejection", ok, f"drift={drift:.1e}")


def test_11_cli_golden(tmp_path, acceptance):
    out = tmp_path / "reproduce.json"
    code = main(["reproduce", "--json", str(out)])
    report = json.loads(out.read_text())
    deltas = {row["t"]: row["delta_h"] for row in report["collapse_times"]}
    ok = code == 0 and deltas == {1.0: 0.125, 3.0: 0.125}
    assert acceptance(11, "CLI reproduce golden", ok, f"exit={code} delta_h={deltas}")
