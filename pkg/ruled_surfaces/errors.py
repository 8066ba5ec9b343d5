class RuledSurfaceError(Exception):
    """Base class for every error raised by ruled_surfaces."""


class DivisionByZero(RuledSurfaceError, ZeroDivisionError):
    pass


class IncompatibleField(RuledSurfaceError, ValueError):
    pass


class ZeroFunction(RuledSurfaceError, ValueError):
    pass


class PointNotOnCurve(RuledSurfaceError, ValueError):
    pass


class SingularCurve(RuledSurfaceError, ValueError):
    pass


class NotPrincipal(RuledSurfaceError, ValueError):
    pass


class NonRationalSupport(RuledSurfaceError):
    """A zero or pole (or an auxiliary point) is not rational over the base field."""


class IncompleteTorsion(RuledSurfaceError):
    pass


class InvalidSection(RuledSurfaceError, ValueError):
    pass


class NotDisjoint(RuledSurfaceError):
    pass


class EqualSections(RuledSurfaceError, ValueError):
    pass


class NotGlobalSection(RuledSurfaceError):
    pass


class FieldTooLarge(RuledSurfaceError):
    pass


class BudgetExceeded(RuledSurfaceError):
    pass


class BaseMismatch(RuledSurfaceError, ValueError):
    pass


class NotMaximalClass(RuledSurfaceError):
    pass


class InconsistentCenter(RuledSurfaceError, ValueError):
    pass


class CharTwoOutOfScope(RuledSurfaceError):
    pass


class InputError(RuledSurfaceError, ValueError):
    """
    Malformed command line input.

    Parameters
    ----------
    message : str
        what went wrong
    text : str
        the offending input
    position : int
        0-based character offset of the first bad character, or None
    """

    def __init__(self, message, text='', position=None):
        super().__init__(message)
        self.message = message
        self.text = text
        self.position = position

    def annotated(self):
        if self.position is None or not self.text:
            return self.message
        return '{}\n  {}\n  {}^'.format(self.message, self.text, ' ' * self.position)
