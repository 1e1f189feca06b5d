"""Exception hierarchy shared across the package.

Every error raised on a user-facing path derives from EqnOptError so the CLI
can map error classes onto distinct exit codes.
"""


class EqnOptError(Exception):
    """Base class for all eqnopt errors."""


class StructuralError(EqnOptError):
    """Malformed term construction (bad arity, nested concat, ...)."""


class EvalError(EqnOptError):
    """Evaluation hit an unbound variable."""


class ParseError(EqnOptError):
    """Syntax or semantic error in an input file."""

    def __init__(self, message, line=None, col=None):
        self.line = line
        self.col = col
        if line is not None:
            message = f"{message} (line {line}, col {col})"
        super().__init__(message)


class CapacityError(EqnOptError):
    """E-graph grew past its configured node capacity."""


class ExtractionError(EqnOptError):
    """No acyclic term can be extracted from the requested class."""


class ModelError(EqnOptError):
    """Cost-model document failed to load or validate."""


class SelectionError(EqnOptError):
    """Cost evaluation failed for a pool candidate."""


class InterfaceError(EqnOptError):
    """Two circuits cannot be compared: input/output interfaces differ."""
