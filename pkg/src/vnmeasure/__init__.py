"""Energy bookkeeping for von Neumann system-detector measurement models."""
from .collapse import (
    CollapseOutcome,
    EnergyLedger,
    cross_term,
    cycle_ledger,
    energy_balance,
    ensemble_density,
    project,
    qnd_extend,
)
from .dynamics import CorrelationReport, correlation_report, evolve, scan_premeasurement
from .errors import (
    ConfigError,
    DegenerateState,
    DimensionMismatch,
    NotHermitian,
    NotNormal,
    NotQND,
    ProbabilityLeak,
)
from .linalg import (
    PAULI,
    SpectralDecomposition,
    commutator,
    is_hermitian,
    is_unitary,
    principal_log_hamiltonian,
    spectral_decompose,
    tensor_product,
    unitary_exp,
)
from .model import (
    DensityMatrix,
    MeasurementScheme,
    PauliDecomposition,
    PointerBasis,
    PureState,
    build_standard_scheme,
    expectation,
    pauli_compose,
    pauli_decompose,
    split_terms,
)
from .units import HBAR, PLANCK_H, from_h, to_h

__version__ = "0.1.0"
