"""Exception types that the command line maps to exit codes."""


class DataError(ValueError):
    """Input data is malformed or does not fit the requested operation."""


class NumericalError(ArithmeticError):
    """A computation could not be carried out reliably (rank loss, oracle mismatch)."""
