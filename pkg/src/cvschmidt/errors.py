"""Exception types shared across the package."""


class InputError(ValueError):
    """Invalid argument, configuration or domain violation."""


class NumericalError(ArithmeticError):
    """A computation produced a non-finite or otherwise unusable value."""
