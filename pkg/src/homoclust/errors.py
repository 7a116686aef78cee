"""Exception types raised across the workbench.

Everything derives from WorkbenchError so callers (and the CLI) can catch
data problems in one place without swallowing programming errors.
"""


class WorkbenchError(Exception):
    """Base class for all workbench-specific failures."""


class MissingFile(WorkbenchError):
    pass


class MalformedRecord(WorkbenchError):
    def __init__(self, line: int, reason: str):
        super().__init__(f"line {line}: {reason}")
        self.line = line
        self.reason = reason


class IndexOutOfRange(WorkbenchError):
    pass


class DuplicateSenseKey(WorkbenchError):
    pass


class DuplicateKey(WorkbenchError):
    pass


class DimensionMismatch(WorkbenchError):
    pass


class MixedLemma(WorkbenchError):
    pass


class MixedDimension(WorkbenchError):
    pass


class MixedGroup(WorkbenchError):
    """One sense key mapped to more than one homonym group."""


class EmptyInput(WorkbenchError):
    pass


class KOutOfRange(WorkbenchError):
    pass


class TooFewPoints(WorkbenchError):
    pass


class NonPositiveBandwidth(WorkbenchError):
    pass


class LengthMismatch(WorkbenchError):
    pass


class DimsTooLarge(WorkbenchError):
    pass


class PerplexityTooLarge(WorkbenchError):
    pass


class MissingEmbeddings(WorkbenchError):
    pass


class IoError(WorkbenchError):
    pass
