"""Exception types shared across the package."""


class RigidLocError(Exception):
    """Base class for all errors raised by rigidloc."""


class ParseError(RigidLocError, ValueError):
    def __init__(self, message, position=None, line=None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if position is not None:
            where.append(f"position {position}")
        if where:
            message = f"{message} ({', '.join(where)})"
        super().__init__(message)
        self.position = position
        self.line = line


class DegreeMismatch(RigidLocError, ValueError):
    pass


class NotInGroup(RigidLocError, ValueError):
    """A permutation expected to lie in a group failed the membership test."""


class GuardExceeded(RigidLocError):
    """A desk-scale guard fired; callers turn this into an Undecided result."""


class CosetOverflow(GuardExceeded):
    pass


class AtlasError(RigidLocError):
    pass


class InvariantBreach(RigidLocError, AssertionError):
    """Two independent routes disagreed. This is a bug, never a verdict."""
