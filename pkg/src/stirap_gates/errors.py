"""Exception hierarchy shared across the simulation modules."""


class SimulationError(Exception):
    """Base class for all errors raised by this package."""


class BasisMismatchError(SimulationError):
    """Two state vectors live in incompatible state spaces."""


class ConfigurationError(SimulationError):
    """Invalid pulse, grid or Hamiltonian configuration."""


class DegenerateDarkSpaceError(SimulationError):
    """Dark states requested where the dark subspace changes dimension."""


class TotalDecayError(SimulationError):
    """State norm vanished; conditional renormalization is undefined."""


class IntegrationError(SimulationError):
    """Integrator instability (norm growth beyond tolerance)."""


class NumericalError(SimulationError):
    """NaN or Inf encountered during propagation."""
