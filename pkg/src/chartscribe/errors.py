"""Exception hierarchy shared across the package."""

from __future__ import annotations


class ChartScribeError(Exception):
    """Base class for all errors raised by this package."""


# --- bundle validation ------------------------------------------------------

class BundleValidationError(ChartScribeError):
    """A chart bundle violates a structural invariant."""


class EmptyTableError(BundleValidationError):
    pass


class RaggedRowError(BundleValidationError):
    def __init__(self, row_index: int, expected: int, got: int):
        self.row_index = row_index
        super().__init__(
            f"row {row_index} has {got} cells, expected {expected}"
        )


class UnknownChartTypeError(BundleValidationError):
    def __init__(self, type_text: str):
        self.type_text = type_text
        super().__init__(f"unknown chart type: {type_text!r}")


class DuplicateColumnError(BundleValidationError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"duplicate column name: {name!r}")


# --- parsing ----------------------------------------------------------------

class MalformedDocumentError(ChartScribeError):
    pass


class MissingFieldError(ChartScribeError):
    def __init__(self, field: str):
        self.field = field
        super().__init__(f"missing required field: {field!r}")


class EmptyInputError(ChartScribeError):
    pass


class MalformedMarkupError(ChartScribeError):
    pass


class InvalidHexError(ChartScribeError):
    def __init__(self, value: str):
        self.value = value
        super().__init__(f"not a 6-digit hex color: {value!r}")


class BundleFileMissingError(ChartScribeError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"bundle file not found: {name}")


# --- remote client ----------------------------------------------------------

class RemoteError(ChartScribeError):
    pass


class AuthFailedError(RemoteError):
    pass


class RemoteNotFoundError(RemoteError):
    def __init__(self, chart_id: str):
        self.chart_id = chart_id
        super().__init__(f"remote chart not found: {chart_id}")


class UpstreamError(RemoteError):
    def __init__(self, status: int, detail: str = ""):
        self.status = status
        super().__init__(f"upstream returned {status}" + (f": {detail}" if detail else ""))


class RemoteTimeoutError(RemoteError):
    pass


# --- statistics -------------------------------------------------------------

class EmptySeriesError(ChartScribeError):
    pass


class TooShortError(ChartScribeError):
    pass


class ConstantInputError(ChartScribeError):
    pass


class NegativeValueError(ChartScribeError):
    pass


class ZeroTotalError(ChartScribeError):
    pass


class UnknownVariableError(ChartScribeError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"unknown variable: {name!r}")


# --- text generation --------------------------------------------------------

class MissingVariableChoiceError(ChartScribeError):
    def __init__(self, feature_id: str):
        self.feature_id = feature_id
        super().__init__(f"feature {feature_id!r} requires a variable choice")


class UnboundPlaceholderError(ChartScribeError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"template placeholder {name!r} is not bound")


class InvalidPermutationError(ChartScribeError):
    pass


class UnknownFeatureEditError(ChartScribeError):
    def __init__(self, feature_id: str):
        self.feature_id = feature_id
        super().__init__(f"edit references absent feature: {feature_id!r}")


class NonFiniteError(ChartScribeError):
    pass


# --- selection / service ----------------------------------------------------

class SelectionValidationError(ChartScribeError):
    pass


class ChartNotFoundError(ChartScribeError):
    def __init__(self, chart_id: str):
        self.chart_id = chart_id
        super().__init__(f"no chart with id {chart_id!r}")


class InvalidPageError(ChartScribeError):
    pass
