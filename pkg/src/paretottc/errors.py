"""Exception hierarchy shared by every module."""


class ParetoTTCError(Exception):
    """Base class for domain errors (CLI exit code 1)."""


class ProfileError(ParetoTTCError, ValueError):
    pass


class DuplicateEntry(ProfileError):
    pass


class WrongLength(ProfileError):
    pass


class OutOfRange(ProfileError):
    pass


class SizeMismatch(ParetoTTCError, ValueError):
    pass


class InstanceTooLarge(ParetoTTCError):
    pass


class NotParetoOptimal(ParetoTTCError):
    pass


class InconsistentFixedSet(ParetoTTCError):
    pass


class InvalidTagState(ParetoTTCError):
    """Start state whose tags were not produced by ``dressup``."""


class StuckState(ParetoTTCError, RuntimeError):
    """A non-terminal inverse state with no circles. Always a bug."""


class MissingClasses(ParetoTTCError):
    pass


class EmptyFrontier(ParetoTTCError):
    pass


class FrontierMismatch(ParetoTTCError):
    pass


class EmptyInput(ParetoTTCError):
    pass


class ParseError(ParetoTTCError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)
