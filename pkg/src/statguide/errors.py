"""Exception hierarchy shared across the package.

The HTTP layer maps these onto status codes, so raising the right class
matters more than the message text: SchemaError -> 422, LifecycleError -> 409,
UnknownIdError -> 404, everything else DataError-ish -> 400.
"""


class StatGuideError(Exception):
    """Base class for all errors raised by this package."""


class DataError(StatGuideError, ValueError):
    """Invalid data or an operation applied to data that cannot support it."""


class CsvFormatError(DataError):
    """Structurally broken CSV input (ragged rows, duplicate headers)."""


class ColumnTypeError(DataError):
    """Operation requires a different column dtype."""


class SingularDesignError(DataError):
    """Design matrix is rank deficient.

    ``columns`` names a set of columns involved in the linear dependence.
    """

    def __init__(self, message: str, columns: tuple[str, ...] = ()):
        super().__init__(message)
        self.columns = columns


class DegenerateDataError(DataError):
    """Input data degenerate for the requested statistic (e.g. zero variance)."""


class SchemaError(StatGuideError, ValueError):
    """Submitted parameters violate a step's input schema.

    ``details`` is a list of {"param": name, "reason": text} dicts.
    """

    def __init__(self, message: str, details: list[dict] | None = None):
        super().__init__(message)
        self.details = details or []


class LifecycleError(StatGuideError, RuntimeError):
    """Operation applied to a step or session in the wrong state."""


class UnknownIdError(StatGuideError, KeyError):
    """Unknown session, step, template, or suggestion identifier."""

    def __str__(self) -> str:  # KeyError quotes its arg; keep plain text
        return self.args[0] if self.args else ""
