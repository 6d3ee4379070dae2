"""
Exception types raised by citecheck
"""

from typing import Optional


class CitecheckError(Exception):
    """Base class for every error citecheck raises on purpose"""


class ValidationError(CitecheckError, ValueError):
    """A domain value breaks one of the documented invariants"""


class EmptyProfileError(CitecheckError, ValueError):
    """Operation needs at least one paper"""


class ConfigError(CitecheckError, ValueError):
    """Bad setting or generator parameter"""

    def __init__(self, parameter: str, reason: str):
        self.parameter = parameter
        self.reason = reason
        super().__init__(f"{parameter}: {reason}")


class MissingBaselineError(CitecheckError, KeyError):
    """No expected-citation cell for a (field, year) pair"""

    def __init__(self, field_id: Optional[str], pub_year: Optional[int]):
        self.field_id = field_id
        self.pub_year = pub_year
        super().__init__(field_id, pub_year)

    def __str__(self) -> str:
        return f"no baseline for field={self.field_id!r} year={self.pub_year!r}"


class UndefinedCorrelationError(CitecheckError, ArithmeticError):
    """Correlation asked of a constant vector"""


class RegressionError(CitecheckError, ArithmeticError):
    """Not enough usable points to fit a line"""


class IngestError(CitecheckError):
    """A file does not follow its documented schema"""

    def __init__(self, path, reason: str, row: Optional[int] = None, column: Optional[str] = None):
        self.path = str(path)
        self.row = row
        self.column = column
        self.reason = reason
        location = self.path
        if row is not None:
            location += f":{row}"
        if column is not None:
            location += f":{column}"
        super().__init__(f"{location}: {reason}")
