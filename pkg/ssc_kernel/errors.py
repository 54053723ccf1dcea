"""Exception hierarchy shared by every kernel module."""

from dataclasses import dataclass
from typing import Any, List, Optional


class KernelError(Exception):
    """Base class for all kernel errors."""


class IllFormed(KernelError):
    """Raised when a context, type, term or substitution does not typecheck."""

    def __init__(self, message: str, path: Optional[List[str]] = None):
        super().__init__(message)
        self.message = message
        self.path = list(path or [])

    def at(self, segment: str) -> "IllFormed":
        """Prepend a path segment while the error propagates outwards."""
        self.path.insert(0, segment)
        return self

    def __str__(self) -> str:
        if not self.path:
            return self.message
        return f"{self.message} (at {'/'.join(self.path)})"


class NotInferable(IllFormed):
    """Raised when a checking-only term is used in inference position."""


class TypeMismatch(IllFormed):
    """Raised when a term's type is not convertible to the expected one."""

    def __init__(self, expected: Any, actual: Any, path: Optional[List[str]] = None):
        from .sexpr import show

        super().__init__(
            f"type mismatch: expected {show(expected)}, got {show(actual)}", path
        )
        self.expected = expected
        self.actual = actual


class Exhausted(KernelError):
    """Raised by the generator when no inhabitant is found within depth."""


class StepMismatch(KernelError):
    """Raised when a derivation step is not an instance of its cited rule."""

    def __init__(self, index: int, expected: str, got: str):
        super().__init__(f"step {index}: expected an instance of {expected}, got {got}")
        self.index = index
        self.expected = expected
        self.got = got


class ParseError(KernelError):
    """Raised on malformed concrete syntax."""

    def __init__(self, message: str, position: Optional[int] = None):
        if position is not None:
            message = f"{message} at offset {position}"
        super().__init__(message)
        self.position = position


class UsageError(ValueError):
    """Raised when command-line input asks for something a command cannot do.

    Not a kernel error: handlers that turn kernel errors into failed
    verdicts let it through to the usage path.
    """


@dataclass(frozen=True)
class Verdict:
    """Boolean result with an optional diagnostic."""

    ok: bool
    diagnostic: str = ""

    def __bool__(self) -> bool:
        return self.ok
