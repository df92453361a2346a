"""Exception types raised by the toolkit."""


class BVFlowError(Exception):
    """Base class for all toolkit errors."""


class UnboundedVariation(BVFlowError, ValueError):
    """Total variation diverges on the requested interval."""


class InvalidIntegrand(BVFlowError, ValueError):
    """A level-function returned a non-finite value inside the support."""


class NumericalBlowUp(BVFlowError, FloatingPointError):
    """A simulated state became non-finite or left the blow-up guard."""

    def __init__(self, step, message=None):
        self.step = step
        super().__init__(message or f"numerical blow-up at step {step}")


class TrajectoryNoiseMismatch(BVFlowError, ValueError):
    """Trajectory and noise path were not produced together."""


class NotSmoothDrift(BVFlowError, TypeError):
    """The drift has atoms, so its derivative is not a function."""


class MonotonicityBreach(BVFlowError, RuntimeError):
    """Coupled initial points swapped order under the discrete flow."""


class InsufficientLevelCoverage(BVFlowError, ValueError):
    """A level grid misses an atom of the drift measure that the path visited."""


class NoStationaryRegime(BVFlowError, ValueError):
    """The drift has no limits a < 0 < b at infinity, or the density is not normalisable."""


class ConfigurationUnstable(BVFlowError, RuntimeError):
    """Too many Monte-Carlo runs were excluded for ordering breaches."""


class ConfigError(BVFlowError, ValueError):
    """Invalid experiment configuration."""
