"""Exception types raised across the package."""


class FrobSimError(Exception):
    """Base class for all package errors."""


class ParseError(FrobSimError):
    """Malformed graph, matrix or sidecar input."""


class PreconditionError(FrobSimError, ValueError):
    """An operation was called outside its domain (size, shape, structure)."""


class NotPSDError(PreconditionError):
    """A matrix expected to be positive semidefinite has a negative eigenvalue."""

    def __init__(self, name, min_eig, threshold):
        self.name = name
        self.min_eig = min_eig
        self.threshold = threshold
        super().__init__(
            f"matrix {name} is not positive semidefinite: "
            f"min eigenvalue {min_eig:.3e} < -{threshold:.3e}"
        )


class InstanceTooLargeError(FrobSimError):
    """Enumeration would exceed the configured budget."""

    def __init__(self, what, count, budget):
        self.count = count
        self.budget = budget
        super().__init__(f"instance too large for {what}: {count} > budget {budget}")


class ConvergenceError(FrobSimError):
    def __init__(self, sweeps, residual):
        self.sweeps = sweeps
        self.residual = residual
        super().__init__(
            f"Jacobi eigensolver did not converge after {sweeps} sweeps "
            f"(off-diagonal norm {residual:.3e})"
        )
