"""Exception hierarchy shared by all modules and mapped to CLI exit codes."""


class DagTopoError(Exception):
    """Base class for every error raised by this package."""

    exit_code = 2


class IngestionError(DagTopoError):
    """Bad input data: malformed line, unknown endpoint, unreadable file."""

    def __init__(self, message, path=None, line=None):
        self.path = path
        self.line = line
        where = ""
        if path is not None:
            where = f"{path}:"
        if line is not None:
            where += f"{line}: "
        elif where:
            where += " "
        super().__init__(where + message)


class ValidationError(DagTopoError):
    """An edge violates the edge type rules in strict mode."""

    def __init__(self, src_type, dst_type, count=1):
        self.src_type = src_type
        self.dst_type = dst_type
        self.count = count
        super().__init__(
            f"disallowed edge type {src_type.abbrev}->{dst_type.abbrev} "
            f"({count} edge(s))"
        )


class CorruptFileError(DagTopoError):
    """Binary graph file failed structural or CRC checks."""


class UnsupportedFormatError(DagTopoError):
    """File is not a binary graph file (bad magic)."""


class UnsupportedVersionError(UnsupportedFormatError):
    """Binary graph file has a format version this build cannot read."""


class DomainError(DagTopoError):
    """Input is well formed but outside an operation's mathematical domain."""

    exit_code = 3
