"""Altes log-periodic chirplets and the hyperbolic chirplet transform."""

from altes.chirplet import (
    AnalyticSignal,
    ChirpletParams,
    ClassicAltesParams,
    Spectrum,
    classic_to_modern,
    homogeneity_constant,
    modern_to_classic,
    response,
    synth_spectrum,
    synth_time,
)
from altes.errors import (
    AdvisoryError,
    AltesError,
    DegenerateScaleError,
    DomainError,
    InvalidParameterError,
    LocalizationError,
    SingularChirpRateError,
)

__version__ = "0.1.0"

__all__ = [
    "AdvisoryError",
    "AltesError",
    "AnalyticSignal",
    "ChirpletParams",
    "ClassicAltesParams",
    "DegenerateScaleError",
    "DomainError",
    "InvalidParameterError",
    "LocalizationError",
    "SingularChirpRateError",
    "Spectrum",
    "classic_to_modern",
    "homogeneity_constant",
    "modern_to_classic",
    "response",
    "synth_spectrum",
    "synth_time",
]
