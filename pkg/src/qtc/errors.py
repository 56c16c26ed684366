"""Exception hierarchy shared across the pipeline.

Validation-type failures map to process exit code 1, numerical aborts to
exit code 2 (see qtc.cli).
"""


class QtcError(Exception):
    """Base class for all package errors."""


class ValidationError(QtcError):
    """Inputs violate a documented precondition or invariant."""


class SchemaError(ValidationError):
    """A structured input (CSV header, JSON document) is missing required fields."""


class ParseError(ValidationError):
    """A file could not be parsed; message includes the offending row where known."""


class VersioningError(ValidationError):
    """A stage artifact does not match the stage expected by the consumer."""


class NumericalError(QtcError):
    """A numerical routine aborted (non-finite objective, failed decomposition)."""
