"""
Error types raised by the xG pipeline.

Every error carries a machine-parsable ``code`` (the class name) so the CLI can
report failures as a single ``error=<code> <context>`` line.
"""


class XgError(Exception):
    """Base class for all pipeline errors."""

    code = "XgError"

    def __init__(self, message, line=None, context=None):
        super().__init__(message)
        self.message = message
        self.line = line
        self.context = context

    def one_line(self):
        """Returns the single-line form used on stderr."""
        text = " ".join(str(self.message).split())
        if self.line is not None:
            text = f"line {self.line}: {text}"
        return f"error={self.code} {text}"


class MissingColumn(XgError):
    code = "MissingColumn"


class OutOfRangeCoordinate(XgError):
    code = "OutOfRangeCoordinate"


class InvalidEnum(XgError):
    code = "InvalidEnum"


class InvalidRecord(XgError):
    code = "InvalidRecord"


class EmptyPartition(XgError):
    code = "EmptyPartition"


class EmptyDataset(XgError):
    code = "EmptyDataset"


class InvalidZoneTable(XgError):
    code = "InvalidZoneTable"


class MissingZoneModel(XgError):
    code = "MissingZoneModel"


class UnsupportedSpec(XgError):
    code = "UnsupportedSpec"


class NonFiniteFeature(XgError):
    code = "NonFiniteFeature"


class DimensionMismatch(XgError):
    code = "DimensionMismatch"


class VersionMismatch(XgError):
    code = "VersionMismatch"


class CorruptArtifact(XgError):
    code = "CorruptArtifact"


class SingleClass(XgError):
    code = "SingleClass"


class UnknownFeature(XgError):
    code = "UnknownFeature"


class NotWhitelisted(XgError):
    code = "NotWhitelisted"


class IncompatibleArtifact(XgError):
    code = "IncompatibleArtifact"


class InvalidConfig(XgError):
    code = "InvalidConfig"
