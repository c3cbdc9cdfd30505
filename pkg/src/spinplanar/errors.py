"""Exception types shared across the package."""


class SpinPlanarError(Exception):
    pass


class ConfigError(SpinPlanarError, ValueError):
    """Scalars or elements built over different values of n were combined."""


class ArityError(SpinPlanarError, ValueError):
    """An operation was applied to an element of the wrong colour."""


class ValidationError(SpinPlanarError, ValueError):
    """A diagram, label or index is structurally invalid."""
