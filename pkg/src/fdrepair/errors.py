class RepairError(Exception):
    """Base class for errors raised by fdrepair."""


class ParseError(RepairError, ValueError):
    def __init__(self, message: str, line: int | None = None):
        super().__init__(message)
        self.line = line


class SchemaError(RepairError, ValueError):
    pass


class ExtensionError(RepairError, ValueError):
    """An LHS extension would produce a trivial or malformed FD."""
