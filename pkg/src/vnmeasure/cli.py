"""Command-line front end: ``reproduce``, ``run`` and ``scan``.

Energies in every output are multiples of Planck's h, written with 12
significant digits. Exit codes: 0 success, 1 reproduction/validation
failure, 2 configuration error.
"""
import argparse
import csv
import io
import json
import logging
import math
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .collapse import cycle_ledger, energy_balance, ensemble_density, ledger_for_state
from .dynamics import correlation_report, evolve, scan_premeasurement, time_grid
from .errors import ConfigError
from .linalg import principal_log_hamiltonian, spectral_decompose, unitary_exp
from .model import (
    PAULI_LABELS,
    STANDARD_UNITARY,
    STANDARD_UNITARY_T3,
    MeasurementScheme,
    PauliDecomposition,
    PointerBasis,
    PureState,
    build_standard_scheme,
    pauli_compose,
    pauli_decompose,
    standard_hamiltonian,
)
from .units import from_h, to_h

log = logging.getLogger("vnmeasure")

EXIT_OK, EXIT_FAILED, EXIT_CONFIG = 0, 1, 2
SIG_DIGITS = 12
# anything below this (in units of h) is roundoff
ZERO_SNAP = 1e-13

SCAN_COLUMNS = ("t", "e_pre_h", "e_post_h", "delta_h", "score", "is_premeasurement")


def sig(x):
    """Round to the reported precision, snapping roundoff to zero."""
    x = float(x)
    if abs(x) < ZERO_SNAP:
        return 0.0
    return float(f"{x:.{SIG_DIGITS}g}")


# --------------------------------------------------------------------------
# configuration


@dataclass
class ScanBlock:
    t_start: float
    t_end: float
    step: float
    tol: float = 1e-6


@dataclass
class ScenarioConfig:
    hamiltonian: object = "standard"  # "standard" or {label: coefficient in h}
    initial_state: object = "standard"  # "standard" or [[re, im]] * 4
    pointer_angles: tuple = (0.0, 0.0)
    collapse_time: float = 1.0
    scan: ScanBlock | None = None
    cycles: int | None = None

    def to_dict(self):
        out = asdict(self)
        out["pointer_angles"] = list(self.pointer_angles)
        if isinstance(self.hamiltonian, dict):
            out["hamiltonian"] = {"pauli": dict(self.hamiltonian)}
        if self.scan is None:
            del out["scan"]
        if self.cycles is None:
            del out["cycles"]
        return out

    def scheme(self):
        if self.hamiltonian == "standard":
            h = standard_hamiltonian()
        else:
            coeffs = {k: from_h(v) for k, v in self.hamiltonian.items()}
            h = pauli_compose(PauliDecomposition.from_dict(coeffs))
        if self.initial_state == "standard":
            psi = build_standard_scheme().initial_state
        else:
            psi = PureState.normalized([complex(re, im) for re, im in self.initial_state])
        theta, phi = self.pointer_angles
        return MeasurementScheme(
            hamiltonian=h,
            initial_state=psi,
            pointer=PointerBasis.from_angles(theta, phi),
            collapse_times=(self.collapse_time,),
        )


def _number(value, name):
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
        raise ConfigError(name, f"expected a finite number, got {value!r}")
    return float(value)


def parse_config(data):
    if not isinstance(data, dict):
        raise ConfigError("<root>", "config must be a JSON object")
    known = {"hamiltonian", "initial_state", "pointer_angles", "collapse_time", "scan", "cycles"}
    for key in data:
        if key not in known:
            raise ConfigError(key, "unknown field")

    ham = data.get("hamiltonian", "standard")
    if ham != "standard":
        if not isinstance(ham, dict) or set(ham) != {"pauli"} or not isinstance(ham["pauli"], dict):
            raise ConfigError("hamiltonian", 'expected "standard" or {"pauli": {...}}')
        coeffs = {}
        for label, value in ham["pauli"].items():
            if len(label) != 2 or any(ch not in PAULI_LABELS for ch in label):
                raise ConfigError(f"hamiltonian.pauli.{label}", "Pauli keys are two letters over I, X, Y, Z")
            # real coefficients keep the Hamiltonian Hermitian
            coeffs[label] = _number(value, f"hamiltonian.pauli.{label}")
        ham = coeffs

    init = data.get("initial_state", "standard")
    if init != "standard":
        if not isinstance(init, list) or len(init) != 4:
            raise ConfigError("initial_state", 'expected "standard" or four [re, im] pairs')
        pairs = []
        for k, pair in enumerate(init):
            if not isinstance(pair, list) or len(pair) != 2:
                raise ConfigError(f"initial_state[{k}]", "expected [re, im]")
            pairs.append([_number(x, f"initial_state[{k}]") for x in pair])
        norm = math.sqrt(sum(re * re + im * im for re, im in pairs))
        if norm == 0:
            raise ConfigError("initial_state", "zero vector")
        if abs(norm - 1) > 1e-6:
            log.warning("initial_state has norm %.6g; renormalizing", norm)
        init = pairs

    angles = data.get("pointer_angles", [0.0, 0.0])
    if not isinstance(angles, list) or len(angles) != 2:
        raise ConfigError("pointer_angles", "expected [theta, phi]")
    angles = tuple(_number(a, "pointer_angles") for a in angles)

    if "collapse_time" not in data:
        raise ConfigError("collapse_time", "missing")
    t_c = _number(data["collapse_time"], "collapse_time")
    if t_c < 0:
        raise ConfigError("collapse_time", "must be non-negative")

    scan = None
    if "scan" in data:
        block = data["scan"]
        if not isinstance(block, dict):
            raise ConfigError("scan", "expected an object")
        for key in ("t_start", "t_end", "step"):
            if key not in block:
                raise ConfigError(f"scan.{key}", "missing")
        scan = ScanBlock(
            _number(block["t_start"], "scan.t_start"),
            _number(block["t_end"], "scan.t_end"),
            _number(block["step"], "scan.step"),
            _number(block.get("tol", 1e-6), "scan.tol"),
        )
        if scan.step <= 0:
            raise ConfigError("scan.step", "must be positive")
        if scan.t_start < 0 or scan.t_end < scan.t_start:
            raise ConfigError("scan", "need 0 <= t_start <= t_end")

    cycles = data.get("cycles")
    if cycles is not None and (isinstance(cycles, bool) or not isinstance(cycles, int) or cycles < 0):
        raise ConfigError("cycles", "expected a non-negative integer")

    return ScenarioConfig(ham, init, angles, t_c, scan, cycles)


def load_config(path):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError("CONFIG_PATH", str(exc)) from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError("CONFIG_PATH", f"invalid JSON: {exc}") from exc
    return parse_config(data)


# --------------------------------------------------------------------------
# reports


@dataclass
class RunReport:
    config: dict
    collapse_time: float
    e_pre_h: float
    e_post_h: float
    cross_h: float
    delta_h: float
    branches: list = field(default_factory=list)  # {branch, probability, branch_energy_h}
    premeasurement_instants: list | None = None
    cycles: int | None = None
    cycle_cumulative_h: float | None = None

    def to_dict(self):
        return asdict(self)

    @classmethod
    def from_dict(cls, d):
        return cls(**d)

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))

    def to_csv(self):
        """Two-column key,value table; structured fields are JSON-encoded."""
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["key", "value"])
        for key, value in self.to_dict().items():
            w.writerow([key, json.dumps(value, sort_keys=True)])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text):
        rows = list(csv.reader(io.StringIO(text)))
        if rows[0] != ["key", "value"]:
            raise ValueError("not a run report CSV")
        return cls.from_dict({k: json.loads(v) for k, v in rows[1:]})


def run_scenario(config):
    scheme = config.scheme()
    ledger = energy_balance(scheme, config.collapse_time)
    row = {k: sig(v) for k, v in ledger.in_h().items()}
    branches = [
        {"branch": o.branch, "probability": sig(o.probability), "branch_energy_h": sig(to_h(o.branch_energy))}
        for o in ledger.outcomes
    ]
    instants = None
    if config.scan is not None:
        sc = config.scan
        instants = [sig(t) for t, _ in scan_premeasurement(scheme, sc.t_start, sc.t_end, sc.step, sc.tol)]
    cumulative = None
    if config.cycles is not None:
        cumulative = sig(to_h(cycle_ledger(scheme, config.collapse_time, config.cycles)))
    return RunReport(
        config=config.to_dict(),
        collapse_time=sig(config.collapse_time),
        branches=branches,
        premeasurement_instants=instants,
        cycles=config.cycles,
        cycle_cumulative_h=cumulative,
        **row,
    )


def scan_rows(config):
    """One row per grid point: energies (in h), premeasurement score and flag."""
    if config.scan is None:
        raise ConfigError("scan", "scan block is required for the scan command")
    scheme = config.scheme()
    sc = config.scan
    rows = []
    for t in time_grid(sc.t_start, sc.t_end, sc.step):
        state = evolve(scheme, t)
        ledger = ledger_for_state(state, scheme.hamiltonian, scheme.pointer)
        rep = correlation_report(state, scheme.system_basis, scheme.pointer, sc.tol)
        rows.append(
            {
                "t": sig(t),
                "e_pre_h": sig(to_h(ledger.e_pre)),
                "e_post_h": sig(to_h(ledger.e_post)),
                "delta_h": sig(to_h(ledger.delta)),
                "score": sig(rep.score),
                "is_premeasurement": int(rep.is_premeasurement),
            }
        )
    return rows


def write_scan_csv(rows, out):
    w = csv.DictWriter(out, fieldnames=SCAN_COLUMNS, lineterminator="\n")
    w.writeheader()
    w.writerows(rows)


# --------------------------------------------------------------------------
# reproduction of the canonical two-qubit example


def _check(name, observed, expected, tol):
    err = float(np.max(np.abs(np.asarray(observed) - np.asarray(expected))))
    return {"name": name, "max_error": err, "tol": tol, "passed": bool(err <= tol)}


def reproduce():
    """Run the canonical scheme end to end and compare against its known values."""
    scheme = build_standard_scheme()
    h = scheme.hamiltonian
    eighth = 1 / 8
    checks = []

    h_from_log = principal_log_hamiltonian(STANDARD_UNITARY)
    checks.append(_check("log(U(1)) = H", h_from_log, h, 1e-10))
    checks.append(_check("exp(-iH) = U(1)", unitary_exp(h, 1), STANDARD_UNITARY, 1e-10))
    checks.append(_check("exp(-3iH) = U(3)", unitary_exp(h, 3), STANDARD_UNITARY_T3, 1e-10))
    checks.append(
        _check("Psi(1)", evolve(scheme, 1).amplitudes, np.array([1, 0, 0, 1j]) / np.sqrt(2), 1e-10)
    )
    checks.append(
        _check("Psi(3)", evolve(scheme, 3).amplitudes, np.array([0, 1j, 1, 0]) / np.sqrt(2), 1e-10)
    )

    pauli_h = {k: sig(to_h(v)) for k, v in pauli_decompose(h).as_dict(tol=1e-12).items()}
    expected_pauli = {"II": 1, "XI": -1, "YI": -1, "IY": 1, "XY": -1, "YY": 1}
    full = pauli_decompose(h).as_dict()
    checks.append(
        _check(
            "Pauli coefficients",
            [to_h(full[k]) for k in sorted(full)],
            [expected_pauli.get(k, 0) * eighth for k in sorted(full)],
            1e-12,
        )
    )

    eigen_h = sorted(sig(to_h(e)) for e in spectral_decompose(h, "hermitian").eigenvalues.real)
    checks.append(_check("spectrum of H", eigen_h, [-0.25, 0.0, 0.25, 0.5], 1e-10))

    collapses = []
    for t in (1.0, 3.0):
        ledger = energy_balance(scheme, t)
        values = {k: sig(v) for k, v in ledger.in_h().items()}
        collapses.append({"t": t, **values})
        checks.append(_check(f"e_pre(t={t:g})", to_h(ledger.e_pre), 0.0, 1e-10))
        checks.append(_check(f"e_post(t={t:g})", to_h(ledger.e_post) / eighth, 1.0, 1e-9))

    rho = ensemble_density(energy_balance(scheme, 1.0).outcomes).matrix
    checks.append(_check("rho(t=1)", rho, np.diag([0.5, 0, 0, 0.5]), 1e-10))

    instants = [sig(t) for t, _ in scan_premeasurement(scheme, 0.0, 4.0, 1e-3, 1e-6)]
    scan_ok = len(instants) == 2 and abs(instants[0] - 1) <= 1e-3 and abs(instants[1] - 3) <= 1e-3
    checks.append({"name": "premeasurement instants on [0,4)", "max_error": 0.0 if scan_ok else float("inf"),
                   "tol": 1e-3, "passed": scan_ok})

    for n in (1, 10, 100):
        checks.append(_check(f"cycles n={n}", to_h(cycle_ledger(scheme, 1.0, n)), n * eighth, n * 1e-9))

    return {
        "collapse_times": collapses,
        "pauli_h": pauli_h,
        "eigenvalues_h": eigen_h,
        "premeasurement_instants": instants,
        "rho_diagonal": [sig(x) for x in np.diag(rho).real],
        "checks": checks,
        "passed": all(c["passed"] for c in checks),
    }


def format_reproduction(report):
    lines = ["collapse  e_pre [h]        e_post [h]       cross [h]        delta [h]"]
    for row in report["collapse_times"]:
        lines.append(
            f"t={row['t']:<6g} {row['e_pre_h']:<16.12g} {row['e_post_h']:<16.12g} "
            f"{row['cross_h']:<16.12g} {row['delta_h']:+.12g}"
        )
    lines.append("")
    lines.append("Pauli coefficients [h]: " + ", ".join(f"{k}={v:+g}" for k, v in report["pauli_h"].items()))
    lines.append("eigenvalues of H [h]:   " + ", ".join(f"{e:g}" for e in report["eigenvalues_h"]))
    lines.append("premeasurement instants: " + ", ".join(f"{t:g}" for t in report["premeasurement_instants"]))
    lines.append("")
    width = max(len(c["name"]) for c in report["checks"])
    for c in report["checks"]:
        status = "ok" if c["passed"] else "FAIL"
        lines.append(f"{c['name']:<{width}}  err={c['max_error']:.2e}  tol={c['tol']:.0e}  {status}")
    return "\n".join(lines)


# --------------------------------------------------------------------------
# entry point


def build_parser():
    parser = argparse.ArgumentParser(prog="vnmeasure", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("reproduce", help="reproduce the canonical two-qubit example")
    p.add_argument("--json", metavar="PATH", help="also write the report as JSON")

    p = sub.add_parser("run", help="collapse a configured scheme once")
    p.add_argument("config", metavar="CONFIG_PATH")
    p.add_argument("--format", choices=("csv", "json"), default="json")
    p.add_argument("--out", metavar="PATH", help="output file (default: stdout)")

    p = sub.add_parser("scan", help="energy ledger and premeasurement score over a time grid")
    p.add_argument("config", metavar="CONFIG_PATH")
    p.add_argument("--out", metavar="PATH", required=True)
    return parser


def _emit(text, out):
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        if args.command == "reproduce":
            report = reproduce()
            print(format_reproduction(report))
            if args.json:
                Path(args.json).write_text(json.dumps(report, indent=2) + "\n")
            return EXIT_OK if report["passed"] else EXIT_FAILED

        config = load_config(args.config)
        if args.command == "run":
            report = run_scenario(config)
            _emit(report.to_csv() if args.format == "csv" else report.to_json(), args.out)
            return EXIT_OK

        rows = scan_rows(config)
        with open(args.out, "w", newline="") as fh:
            write_scan_csv(rows, fh)
        return EXIT_OK
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ValueError as exc:
        # Hermiticity/normalization failures from a parsed config
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
