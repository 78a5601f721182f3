"""Exception hierarchy shared by every gridknot module."""


class GridError(ValueError):
    """Base class for malformed diagrams and inapplicable operations."""


class RowCountError(GridError):
    def __init__(self, row, count):
        self.row = row
        self.count = count
        super().__init__(f"row {row} is used {count} times (expected exactly 2)")


class DegeneratePair(GridError):
    def __init__(self, column, row):
        self.column = column
        self.row = row
        super().__init__(f"column {column} joins row {row} to itself")


class SizeError(GridError):
    pass


class RowIndexError(GridError, IndexError):
    def __init__(self, column, row, n):
        self.column = column
        self.row = row
        super().__init__(f"column {column} refers to row {row} outside [0, {n})")


class ParseError(GridError):
    """Malformed input file; carries a 1-based line and column when known."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(where + message)


class NotApplicable(GridError):
    pass


class SizeFloor(NotApplicable):
    pass


class SharedEndpoint(GridError):
    pass


class WindowViolation(NotApplicable):
    def __init__(self, row, message):
        self.row = row
        super().__init__(message)


class DegenerateParams(GridError):
    pass


class LimitExceeded(RuntimeError):
    pass
