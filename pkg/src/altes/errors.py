"""Exception types raised by the altes package."""


class AltesError(Exception):
    """Base class for all package errors."""


class InvalidParameterError(AltesError, ValueError):
    """A chirplet parameter lies outside its valid domain."""


class SingularChirpRateError(InvalidParameterError):
    """Chirp rate of exactly 1, where the phase term is undefined."""


class DomainError(AltesError, ValueError):
    """A function was evaluated outside its domain (e.g. non-positive frequency)."""


class LocalizationError(AltesError):
    """A threshold crossing could not be located."""


class DegenerateScaleError(AltesError, ValueError):
    """The dilated wavelet has no support on the discrete frequency grid."""


class AdvisoryError(AltesError):
    """A design advisor could not produce a recommendation within its limits."""
