"""Exception hierarchy shared by every layer of the toolkit."""


class SingInvError(Exception):
    """Base class for all toolkit errors."""


class InputError(SingInvError, ValueError):
    """Malformed or inadmissible user input (CLI exit code 1)."""


class ParseError(InputError):
    def __init__(self, message, text=None, pos=None):
        self.text = text
        self.pos = pos
        if pos is not None:
            message = f"{message} at position {pos}"
            if text is not None:
                message += f"\n  {text}\n  {' ' * pos}^"
        super().__init__(message)


class UnknownIdentifierError(ParseError):
    pass


class UnboundNameError(InputError, KeyError):
    """A contraction names a tensor that was not bound."""

    def __str__(self):
        return str(self.args[0]) if self.args else ""


class NonHomogeneousError(InputError):
    pass


class ShapeError(InputError):
    pass


class VarianceError(InputError):
    """A contraction pairs two slots of the same variance."""


class CatalogError(InputError):
    pass


class PoleError(SingInvError, ZeroDivisionError):
    """A rational function was evaluated at a zero of its denominator."""


class NonIsolatedError(InputError):
    """The polynomial quotient is infinite-dimensional."""


class UndefinedResult(SingInvError):
    """The value is mathematically undefined (CLI exit code 2)."""


class UndefinedInvariant(UndefinedResult):
    """The denominator invariant vanishes on the given form."""


class ConstructionInapplicable(UndefinedResult):
    """The local algebra does not have the shape the construction needs."""


class NotAnIdealError(UndefinedResult):
    pass


class InconsistencyError(SingInvError):
    """An internal consistency check failed (CLI exit code 3)."""
