"""Exception hierarchy shared by every module of the package."""


class ChordSpectraError(Exception):
    """Base class for all errors raised by chordspectra."""


class EmptyTuple(ChordSpectraError, ValueError):
    pass


class NegativeEntry(ChordSpectraError, ValueError):
    pass


class DanglingChord(ChordSpectraError, ValueError):
    pass


class NonIntegerGenus(ChordSpectraError, ArithmeticError):
    pass


class TooManyChords(ChordSpectraError, ValueError):
    pass


class PolicyMismatch(ChordSpectraError, ValueError):
    pass


class TruncationMismatch(ChordSpectraError, ValueError):
    pass


class NotLogarithmizable(ChordSpectraError, ValueError):
    pass


class NotExponentiable(ChordSpectraError, ValueError):
    pass


class NonIntegralCount(ChordSpectraError, ArithmeticError):
    pass
