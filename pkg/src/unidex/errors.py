"""Exception hierarchy shared across the package.

Parse-time errors carry a source location; geometry and numeric errors
carry enough context to identify the offending object, axis or point.
"""

from __future__ import annotations


class UnidexError(Exception):
    """Base class for all errors raised by this package."""


# --- parsing / validation -------------------------------------------------

class DslError(UnidexError):
    """A problem in the scene-description source text."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)


class DslSyntaxError(DslError):
    pass


class UnknownClassError(DslError):
    pass


class UnknownIdentifierError(DslError):
    pass


class DuplicateIdentifierError(DslError):
    pass


class ConflictingSpecifiersError(DslError):
    pass


class ValidationFailedError(UnidexError):
    """A grammar_check report with errors; carries the report."""

    def __init__(self, report):
        self.report = report
        msgs = "; ".join(issue.message for issue in report.errors)
        super().__init__(f"scene validation failed: {msgs}")


# --- geometry --------------------------------------------------------------

class GeometryError(UnidexError):
    pass


class EmptyRegionError(GeometryError):
    pass


class LowerDimensionalError(EmptyRegionError):
    """A free axis has zero extent; treated as a degenerate empty region."""


class UnboundedRegionError(GeometryError):
    pass


class EmptyIntersectionError(GeometryError):
    pass


class EmptyPolytopeError(GeometryError):
    pass


class EmptySliceError(GeometryError):
    pass


class UnboundedError(GeometryError):
    pass


class ZeroVolumeError(GeometryError):
    pass


class NoFreeDimensionsError(GeometryError):
    pass


class InvalidNError(UnidexError):
    """Design size below the minimum of 2."""


# --- numerics --------------------------------------------------------------

class NumericError(UnidexError):
    pass


class ConvergenceFailureError(NumericError):
    pass


class LpError(NumericError):
    pass


class PipelineError(UnidexError):
    """Wraps an upstream error with the pipeline stage it occurred in."""

    def __init__(self, stage: str, cause: BaseException):
        self.stage = stage
        self.cause = cause
        super().__init__(f"[{stage}] {cause}")
