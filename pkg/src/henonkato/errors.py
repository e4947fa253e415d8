"""Exception types.  The CLI maps ValidationError to exit 2, everything else here to exit 1."""


class HenonKatoError(Exception):
    pass


class ValidationError(HenonKatoError, ValueError):
    """Input does not satisfy a documented precondition."""

    def __init__(self, message, violations=None, path=None):
        super().__init__(message)
        self.violations = list(violations or [message])
        self.path = path


class NotHenonTypeError(ValidationError):
    """A normal form whose combinatorics cannot come from a Hénon map."""


class TypeUndefinedError(ValidationError):
    """The gcd descent on a support never reaches 1."""


class UnrealizableTargetError(ValidationError):
    pass


class InconsistentNormalFormError(HenonKatoError):
    """Peeling a normal form hit a contradiction; ``stage`` is the factor index."""

    def __init__(self, message, stage=None):
        super().__init__(message if stage is None else f"{message} (stage {stage})")
        self.stage = stage


class SolverContradiction(HenonKatoError):
    """The triangular solve met a zero slope or a drifting coefficient."""
