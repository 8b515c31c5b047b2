"""Exception hierarchy shared by every pathlens module."""


class PathlensError(Exception):
    """Base class for all engine errors."""


class ParseError(PathlensError):
    """A CSV row could not be parsed."""

    def __init__(self, message, line=None, path=None):
        self.line = line
        self.path = path
        where = ""
        if path is not None:
            where += f"{path}"
        if line is not None:
            where += f":{line}" if where else f"line {line}"
        super().__init__(f"{where}: {message}" if where else message)


class ValidationError(PathlensError):
    """Input parsed but violates a series invariant."""


class AlignmentError(PathlensError):
    """Two series cannot be aligned on a common calendar."""


class FrequencyMismatch(AlignmentError):
    pass


class InsufficientData(PathlensError):
    pass


class DegenerateInput(PathlensError):
    """Zero-variance input where a standardized moment was requested."""


class DomainError(PathlensError, ValueError):
    pass


class Undefined(PathlensError):
    """The quantity is mathematically undefined for these inputs."""


class WindowOutOfRange(PathlensError, IndexError):
    pass


class EmptyInput(PathlensError):
    pass


class MetadataMismatch(PathlensError):
    """Protocol inputs disagree with the series they describe."""
