"""Exception hierarchy.

Every error carries a stable ``code`` (the class name) so that the command
line front end can report failures as JSON.
"""


class SinglinkError(ValueError):
    """Base class of all library errors."""

    def __init__(self, message="", **details):
        super().__init__(message)
        self.message = message
        self.details = details

    @property
    def code(self):
        return type(self).__name__

    def to_json(self):
        out = {"error": self.code, "message": self.message}
        if self.details:
            out["details"] = {k: _plain(v) for k, v in self.details.items()}
        return out


def _plain(value):
    if isinstance(value, (str, int, float, bool)) or value is None:
        return value
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    return str(value)


# graph core
class UnknownEulerNumber(SinglinkError):
    pass


class UnknownVertex(SinglinkError):
    pass


class UnknownEdge(SinglinkError):
    pass


class UnknownArrow(SinglinkError):
    pass


class InvalidGraph(SinglinkError):
    """Structural problem: duplicate ids, dangling references, bad genus."""


# blow-up calculus
class SelfLoopUnsupported(SinglinkError):
    pass


class NotContractible(SinglinkError):
    pass


class SelfLoopWouldForm(SinglinkError):
    pass


class TangencyWouldForm(SinglinkError):
    pass


class TooLarge(SinglinkError):
    pass


# continued fractions and lens spaces
class NotCoprime(SinglinkError):
    pass


class OutOfRange(SinglinkError):
    pass


class WeightTooSmall(SinglinkError):
    pass


# curve resolution
class InvalidBranch(SinglinkError):
    pass


class InsufficientTruncation(SinglinkError):
    pass


class NotReduced(SinglinkError):
    pass


class BlowupBudgetExceeded(SinglinkError):
    pass


# covers
class MissingMultiplicity(SinglinkError):
    pass


class NonPositiveDegree(SinglinkError):
    pass


class InvalidHJParams(SinglinkError):
    pass


class NonIntegralSolution(SinglinkError):
    pass


class InvalidCoveringData(SinglinkError):
    pass


# input
class ParseError(SinglinkError):
    pass
