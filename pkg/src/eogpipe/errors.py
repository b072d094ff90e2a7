"""Exception hierarchy. CLI exit codes key off these classes."""


class EogError(Exception):
    """Base class for all pipeline errors."""


class NumericOverflowError(EogError, ValueError):
    def __init__(self, index, value):
        super().__init__(f"non-finite sample at index {index}: {value!r}")
        self.index = index


class DomainError(EogError, ValueError):
    pass


class DesignError(EogError, ValueError):
    pass


class UnstableSectionError(EogError, ValueError):
    pass


class SpecificationError(EogError, ValueError):
    pass


class IncompleteCalibrationError(EogError):
    def __init__(self, kind):
        super().__init__(f"calibration sweep has no labeled {kind} movement")
        self.kind = kind


class DegenerateCalibrationError(EogError):
    pass


class ProcessingError(EogError, ValueError):
    def __init__(self, index, reason="non-finite sample"):
        super().__init__(f"{reason} at index {index}")
        self.index = index


class FormatError(EogError, ValueError):
    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class ContractViolation(EogError, ValueError):
    pass


class SinkError(EogError, OSError):
    def __init__(self, sink, cause):
        super().__init__(f"sink {sink!r} failed: {cause}")
        self.sink = sink
