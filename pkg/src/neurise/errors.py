"""Exception hierarchy shared by all modules."""


class NeuriseError(Exception):
    """Base class for package errors."""


class InvalidInputError(NeuriseError, ValueError):
    pass


class ParseError(InvalidInputError):
    """Malformed model/sample/net file.

    ``line`` and ``field`` locate the problem when known.
    """

    def __init__(self, message, line=None, field=None, path=None):
        self.line = line
        self.field = field
        self.path = path
        where = []
        if path is not None:
            where.append(str(path))
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field!r}")
        prefix = ", ".join(where)
        super().__init__(f"{prefix}: {message}" if prefix else message)


class CapacityError(NeuriseError):
    """Requested enumeration or cache exceeds the configured cap."""


class ContractError(NeuriseError):
    """A callback returned something violating its contract."""


class SolverError(NeuriseError):
    """Training/optimization aborted (e.g. non-finite loss)."""
