"""Exception types shared across the package."""


class RRLError(Exception):
    """Base class for all package errors."""


class InvalidParams(RRLError, ValueError):
    pass


class InvalidRestriction(RRLError, ValueError):
    pass


class InvalidDomain(RRLError, ValueError):
    pass


class InvalidArity(RRLError, ValueError):
    pass


class InvalidVertex(RRLError, ValueError):
    pass


class InvalidPadding(RRLError, ValueError):
    pass


class EmptyCondition(RRLError, ArithmeticError):
    """A conditional density was requested for a frame of zero mass."""


class BudgetExceeded(RRLError, RuntimeError):
    pass


class PreconditionUnverified(RRLError, RuntimeError):
    pass


class EditorStuck(RRLError, RuntimeError):
    pass


class SampleTooLarge(RRLError, ValueError):
    pass


class ParseError(RRLError, ValueError):
    pass


class StageError(RRLError, RuntimeError):
    """An experiment stage failed; ``stage`` names it and ``__cause__`` holds the error."""

    def __init__(self, stage: str, exc: BaseException):
        super().__init__(f"[{stage}] {type(exc).__name__}: {exc}")
        self.stage = stage
        self.original = exc
