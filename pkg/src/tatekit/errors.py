"""Exception hierarchy shared by all tatekit modules."""


class TatekitError(Exception):
    """Base class for every error raised by tatekit."""


class ValidationError(TatekitError, ValueError):
    """Input data violates a structural law (group axioms, action laws, ...)."""


class SizeGuardError(TatekitError):
    """A computation was refused because it exceeds a configured size limit."""


class NotCocycleError(TatekitError, ValueError):
    """A cochain that must be a cocycle is not one."""
