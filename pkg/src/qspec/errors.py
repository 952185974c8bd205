"""
Root error classes.

Every concrete error raised by the library derives from one of these roots so that the command line can map
failures to exit codes: input problems (1), tolerance violations (2) and internal invariant failures (3).
"""


class InputError(ValueError):
    """
    Error to raise if caller-supplied data or parameters are invalid.
    """
    pass


class InvariantViolation(AssertionError):
    """
    Error to raise if an internal invariant of the simulation does not hold.
    This always indicates a bug, not a bad input.
    """
    pass


class ToleranceViolation(InvariantViolation):
    """
    Error to raise if a quantum-path result leaves the documented error budget around its oracle value.
    """
    pass


class ParseError(InputError):
    """
    Error to raise if an input file cannot be parsed.
    """
    def __init__(self, message: str, path: str = None, lineno: int = None):
        self.path = path
        self.lineno = lineno
        where = ""
        if path is not None:
            where += path
        if lineno is not None:
            where += ":{}".format(lineno)
        super().__init__("{}: {}".format(where, message) if where else message)


class ConfigError(InputError):
    """
    Error to raise if a run configuration contains unknown keys or out-of-range values.
    """
    pass
