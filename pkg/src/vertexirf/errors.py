"""Exception types shared across the package."""


class DomainError(ValueError):
    """Input outside the mathematical domain (e.g. Im(tau) <= 0)."""


class ConvergenceError(RuntimeError):
    """Series truncation exceeded the hard cap before meeting the tail bound."""


class PoleError(ValueError):
    """Evaluation requested too close to a pole / lattice zero."""


class SingularFactorError(RuntimeError):
    """A matrix factor that must be inverted is numerically singular."""


class SamplingError(RuntimeError):
    """Rejection sampling exhausted its retry budget."""


class WeightError(ValueError):
    """Missing or inconsistent weight data on a graded space."""
