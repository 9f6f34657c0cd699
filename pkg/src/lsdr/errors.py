"""Exception and warning types shared across the package.

The CLI maps these onto exit codes, so raising the right class matters:
ValidationError covers bad parameters and contract violations, InputParseError
covers malformed input files, NumericalError covers solver breakdowns, and
DegeneracyError marks inputs the geometric stages cannot handle directly
(the pipeline catches it and falls back to plain metric scaling).
"""


class LsdrError(Exception):
    """Base class for all package errors."""


class ValidationError(LsdrError, ValueError):
    """Invalid argument or violated precondition."""


class InputParseError(LsdrError, ValueError):
    """Malformed input file; message carries the offending line number."""


class NumericalError(LsdrError, ArithmeticError):
    """A numerical routine failed to converge or produced non-finite output."""


class DegeneracyError(LsdrError, ValueError):
    """Geometric degeneracy that jitter cannot resolve (e.g. rank-deficient cloud)."""


class DegeneracyWarning(UserWarning):
    """Emitted when a stage takes a documented degenerate fallback."""
