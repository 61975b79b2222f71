"""Exception hierarchy.

InputError subclasses are usage or input problems (CLI exit code 2);
MathError subclasses mean a mathematical invariant could not be
established (CLI exit code 1).
"""


class SuppVarError(Exception):
    exit_code = 1

    def __init__(self, message, **details):
        super().__init__(message)
        self.message = message
        self.details = details

    def to_json(self):
        return {"error": type(self).__name__, "message": self.message, "details": self.details}


class InputError(SuppVarError):
    exit_code = 2


class MathError(SuppVarError):
    exit_code = 1


class InvalidParams(InputError):
    pass


class FieldError(InputError):
    pass


class FormatError(InputError):
    pass


class MissingHopf(InputError):
    pass


class SequenceTooShort(InputError):
    pass


class PreconditionViolation(InputError):
    pass


class ZeroClass(InputError):
    pass


class OddDegree(InputError):
    pass


class ZeroProduct(InputError):
    pass


class RadicalFailure(MathError):
    pass


class NonSplitSimple(MathError):
    pass


class NonSplitEnd(MathError):
    pass


class Inconclusive(MathError):
    pass


class LiftFailure(MathError):
    pass


class CacheCorrupt(MathError):
    pass


class InvariantViolation(MathError):
    pass


class PhiDisagreement(MathError):
    pass


class NotFound(MathError):
    pass


class CannotSplit(MathError):
    pass
