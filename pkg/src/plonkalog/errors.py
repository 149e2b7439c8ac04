class PlonkalogError(Exception):
    """Base class for all library errors."""


class ParseError(PlonkalogError):
    def __init__(self, message: str, position: int = 0, line: int = None):
        self.message = message
        self.position = position
        self.line = line
        where = f"line {line}, " if line is not None else ""
        super().__init__(f"{message} ({where}offset {position})")


class SignatureError(PlonkalogError):
    pass


class EvaluationError(PlonkalogError):
    pass


class InvalidSystemError(PlonkalogError):
    def __init__(self, message: str, report=None):
        self.report = report
        super().__init__(message)


class PartitionFunctionError(PlonkalogError):
    def __init__(self, message: str, verdict=None):
        self.verdict = verdict
        super().__init__(message)


class PreconditionError(PlonkalogError):
    pass


class BoundExceeded(PlonkalogError):
    pass


class UnknownName(PlonkalogError):
    pass
