"""Exception hierarchy shared by the engine, parsers and CLI."""


class StipulateError(Exception):
    """Base class for all errors raised by this package."""


class ContractViolation(StipulateError, RuntimeError):
    """An engine operation was called outside its precondition."""


class InputEncodingError(StipulateError, ValueError):
    """An input string contains symbols the machine cannot accept."""


class ScheduleError(StipulateError, ValueError):
    """A stipulation schedule breaks one of the rewrite postulates."""


class DomainError(StipulateError, ValueError):
    """A numeric argument lies outside the operation's domain."""


class ConsistencyError(StipulateError, AssertionError):
    """Two computations that must agree did not."""


class InvalidMachineError(StipulateError, ValueError):
    """A machine description violates a structural invariant."""


class MachineParseError(InvalidMachineError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ConfigError(StipulateError, ValueError):
    """An experiment configuration is malformed or inconsistent."""
