"""Exception types shared across the package."""


class DomainError(ValueError):
    """Input is outside the mathematical domain of an operation."""


class ConvergenceError(RuntimeError):
    """An iterative kernel failed to converge; message carries the residual."""


class ChartDomainError(DomainError):
    """A cluster chart is undefined because a corner minor vanishes."""

    def __init__(self, i: int, k: int, message: str = ""):
        self.i = i
        self.k = k
        super().__init__(message or f"corner minor ({i},{k}) vanishes; chart undefined")


class DegenerateBorderError(DomainError):
    """A border eigen-component is numerically zero (non-generic input)."""


class FlowDegenerationError(RuntimeError):
    """A Hamiltonian trajectory left the strictly interlacing region."""

    def __init__(self, exit_time: float, message: str = ""):
        self.exit_time = exit_time
        super().__init__(message or f"trajectory left the strict region at t={exit_time:.6g}")


class SamplingError(RuntimeError):
    """Rejection sampling exhausted its budget."""


class ScaleError(DomainError):
    """A scale parameter would overflow double precision."""


class StepSizeError(RuntimeError):
    """Finite-difference Richardson check failed; step size unreliable."""


class UnsupportedSizeError(DomainError):
    """Exact exhaustive check requested for a size it does not support."""
