"""Exception types raised across the package."""


class YMLatticeError(Exception):
    pass


class DegenerateLattice(YMLatticeError, ValueError):
    pass


class DegreeError(YMLatticeError, ValueError):
    pass


class ConstraintViolation(YMLatticeError, ValueError):
    pass


class NumericalBlowup(YMLatticeError, FloatingPointError):
    def __init__(self, step, msg=None):
        self.step = step
        super().__init__(msg or f"non-finite state at step {step}")


class ConvergenceError(YMLatticeError, RuntimeError):
    """Iterative solve did not reach tolerance; carries the solver report."""

    def __init__(self, report, msg=None):
        self.report = report
        super().__init__(msg or f"no convergence: {report}")


class IrreducibilityError(ConvergenceError):
    """The covariant Laplacian has a (numerical) kernel at this connection."""


class FormatError(YMLatticeError, ValueError):
    pass


class ConfigError(YMLatticeError, ValueError):
    def __init__(self, msg, key=None, line=None):
        self.key = key
        self.line = line
        super().__init__(msg)
