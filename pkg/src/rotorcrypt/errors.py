"""Exception hierarchy shared by every module."""


class RotorCryptError(Exception):
    """Base class for all domain errors raised by this package."""


class FormatError(RotorCryptError):
    """A file (WAV, PGM/PPM, key or share) is malformed or unsupported."""


class DivergenceError(RotorCryptError):
    """A Hénon orbit left the attractor basin."""


class DegenerateBandError(RotorCryptError):
    pass


class SelectionError(RotorCryptError):
    pass


class SecretTooLargeError(RotorCryptError):
    pass


class InsufficientSharesError(RotorCryptError):
    pass


class MismatchedParamsError(RotorCryptError):
    pass


class NonInvertibleError(RotorCryptError):
    pass


class EmptyImageError(RotorCryptError):
    pass


class DimensionMismatchError(RotorCryptError):
    pass
