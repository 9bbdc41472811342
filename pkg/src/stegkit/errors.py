"""Exception hierarchy shared by every embedding, container and channel module."""


class StegoError(Exception):
    """Base class for all toolkit errors."""


class FormatError(StegoError):
    """A container, frame or header could not be decoded."""


class CapacityError(StegoError):
    """The cover cannot hold the requested payload."""


# framing
class BadMagic(FormatError):
    """No embedded frame was found (the medium carries no message)."""


class Truncated(FormatError):
    """Declared length runs past the available data."""


class CapacityExceeded(CapacityError):
    pass


# text
class KeyExhaustsCover(StegoError):
    pass


class Unsatisfiable(StegoError):
    pass


class NotEnoughGaps(CapacityError):
    pass


class IndexOutOfTable(StegoError):
    pass


# containers
class UnsupportedBmp(FormatError):
    pass


class UnsupportedWav(FormatError):
    pass


class Malformed(FormatError):
    pass


# audio / video parameters
class ClipTooShort(CapacityError):
    pass


class StrengthTooSmall(StegoError):
    pass


class BadAlpha(StegoError):
    pass


class DimensionMismatch(StegoError):
    pass


# network
class ChecksumMismatch(FormatError):
    pass


class BadVersion(FormatError):
    pass


class TemplateTooLarge(StegoError):
    pass


class ProtocolViolation(StegoError):
    pass


# steganalysis
class InsufficientSamples(StegoError):
    pass


class NoInput(StegoError):
    pass
