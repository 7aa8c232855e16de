"""Exception hierarchy shared by all coprimelab modules."""


class CoprimeLabError(Exception):
    """Base class; every error carries a short machine-readable ``code``."""

    code = "error"

    def to_dict(self):
        return {"error": self.code, "message": str(self)}


class RingMismatch(CoprimeLabError):
    code = "ring_mismatch"


class TableMismatch(CoprimeLabError):
    code = "table_mismatch"


class ZeroInverseError(CoprimeLabError, ZeroDivisionError):
    code = "zero_inverse"


class ZeroPolynomialError(CoprimeLabError, ValueError):
    code = "zero_polynomial"


class DivisionNotExact(CoprimeLabError):
    """Raised when an exact division leaves a remainder.

    In the engines this is never swallowed: a failed division means an
    identity that should hold on the iterates does not.
    """

    code = "division_not_exact"

    def __init__(self, message, payload=None):
        super().__init__(message)
        self.payload = payload or {}

    def to_dict(self):
        d = super().to_dict()
        d["payload"] = self.payload
        return d


class MoreThanTwoVariables(CoprimeLabError):
    code = "more_than_two_variables"


class OutOfCone(CoprimeLabError):
    code = "out_of_cone"


class ConeExhausted(CoprimeLabError):
    code = "cone_exhausted"


class BudgetExceeded(CoprimeLabError):
    code = "budget_exceeded"


class SerializationError(CoprimeLabError, ValueError):
    code = "malformed_input"


class ParseError(CoprimeLabError):
    """DSL syntax or semantic error with a 1-based line/column position."""

    code = "parse_error"

    def __init__(self, message, line=1, column=1, expected=()):
        self.line = line
        self.column = column
        self.expected = tuple(expected)
        text = f"{message} at line {line}, column {column}"
        if self.expected:
            text += f" (expected {', '.join(self.expected)})"
        super().__init__(text)

    def to_dict(self):
        d = super().to_dict()
        d.update(line=self.line, column=self.column, expected=list(self.expected))
        return d


class ConfigError(CoprimeLabError):
    """Config validation failure; ``pointer`` is a JSON pointer to the field."""

    code = "config_error"

    def __init__(self, message, pointer=""):
        self.pointer = pointer
        super().__init__(f"{pointer or '/'}: {message}")

    def to_dict(self):
        d = super().to_dict()
        d["pointer"] = self.pointer
        return d
