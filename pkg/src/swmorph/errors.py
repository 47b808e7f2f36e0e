"""Error types shared across the solver."""


class ConfigError(ValueError):
    """Raised for invalid configuration: bad keys, bad values, bad grids."""


class NumericalFailure(RuntimeError):
    """Raised when the integration produces non-finite values or stalls.

    Carries enough context to point at the offending cell and stage.
    """

    def __init__(self, message, t=None, step=None, cell=None, component=None):
        super().__init__(message)
        self.t = t
        self.step = step
        self.cell = cell
        self.component = component
