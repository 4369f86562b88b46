"""Exception hierarchy shared by the simulator modules."""


class NcwalkError(Exception):
    """Base class for all package errors."""


class InvalidSizeError(NcwalkError, ValueError):
    pass


class InvalidSectorError(NcwalkError, ValueError):
    pass


class InvalidStateError(NcwalkError, ValueError):
    pass


class DimensionMismatchError(NcwalkError, ValueError):
    pass


class UndefinedDensityError(NcwalkError, ValueError):
    pass


class OracleScopeError(NcwalkError, ValueError):
    pass


class UnsupportedRegimeError(NcwalkError, ValueError):
    pass


class SingularDenominatorError(NcwalkError, ZeroDivisionError):
    pass


class ConfigError(NcwalkError, ValueError):
    """Invalid run configuration; raised before any computation starts."""


class NumericalFailure(NcwalkError, RuntimeError):
    """An eigensolver or propagation step failed.

    ``context`` carries diagnostics (matrix size, norms, seed) for reporting.
    """

    def __init__(self, message, context=None):
        super().__init__(message)
        self.context = dict(context or {})

    def __str__(self):
        base = super().__str__()
        if not self.context:
            return base
        details = ", ".join(f"{k}={v}" for k, v in self.context.items())
        return f"{base} [{details}]"
