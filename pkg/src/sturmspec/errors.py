"""Exception types shared across the package.

The CLI exit-code contract distinguishes bad input (exit 2) from numerical
failure such as non-convergence or overflow (exit 3), so the two cases get
separate exception classes.
"""


class InputError(ValueError):
    """Invalid user-provided data: unknown spec kinds, bad intervals, ..."""


class NumericsError(RuntimeError):
    """A computation failed: integrator overflow, iteration did not converge,
    or fewer roots than requested were found in the scan window."""
