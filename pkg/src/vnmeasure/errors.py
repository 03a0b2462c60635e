"""Exception types raised across the package."""


class VNMeasureError(Exception):
    pass


class NotNormal(VNMeasureError, ValueError):
    """Matrix fails the unitary/Hermitian predicate it was declared to satisfy."""


class NotHermitian(VNMeasureError, ValueError):
    pass


class DimensionMismatch(VNMeasureError, ValueError):
    pass


class DegenerateState(VNMeasureError, RuntimeError):
    """Every collapse branch fell below the probability floor."""


class ProbabilityLeak(VNMeasureError, ValueError):
    pass


class NotQND(VNMeasureError, ValueError):
    """Interaction does not commute with the system+probe Hamiltonian."""

    def __init__(self, norm):
        self.norm = float(norm)
        super().__init__(f"[H_sp x I, H_int] has max-norm {self.norm:.3e}; not QND")


class ConfigError(VNMeasureError, ValueError):
    def __init__(self, field, message):
        self.field = field
        super().__init__(f"{field}: {message}")
