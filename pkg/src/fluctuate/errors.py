"""Exception hierarchy shared across the package.

The CLI maps these onto exit codes: UsageError -> 1, NumericalError -> 2,
DataError -> 3.
"""


class FluctuateError(Exception):
    """Base class for package errors."""


class UsageError(FluctuateError):
    """Bad command-line arguments or malformed option values."""


class NumericalError(FluctuateError):
    """A numerical procedure failed (no bracket, instability, bad mass)."""


class ConvergenceError(NumericalError):
    """An iteration exhausted its budget without converging."""


class RenewalInstabilityError(NumericalError):
    """The renewal march produced |F| > 1 + 1e-8 (step size too coarse)."""


class DataError(FluctuateError):
    """Missing or malformed input data (files, counts, configs)."""
