"""Altes log-periodic chirplet: parameterizations and waveform synthesis.

The chirplet is defined in the frequency domain by

    U(w) = exp(-kappa_c * log(w / w0)**2) * exp(2j*pi * log(w) / log(lam)),  w > 0

and U(w) = 0 for w <= 0 (analytic form).  ``kappa_c`` is fixed by the
requirement that |U| falls to ``kc_level`` at the upper cutoff ``omega_c``.

Frequencies are in rad/sample under a unit sampling interval, so the
one-sided grid of an ``n_fft``-point transform spans [0, pi].
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from altes.errors import DomainError, InvalidParameterError, SingularChirpRateError

DEFAULT_KC = 0.01  # -40 dB


def kc_from_db(level_db: float) -> float:
    """Convert a cutoff level in dB (20*log10 convention) to a magnitude."""
    return 10.0 ** (level_db / 20.0)


@dataclass(frozen=True)
class ClassicAltesParams:
    """Altes' original quadruple {A, nu, k, c}.

    ``a_gain`` is derived from the unit passband gain condition
    A = k**(-nu**2 / 2) and is not an independent parameter.
    """

    nu: float
    k: float
    c: float
    a_gain: float = field(init=False)

    def __post_init__(self):
        if not (math.isfinite(self.k) and self.k > 1.0):
            raise InvalidParameterError(f"k must be > 1, got {self.k!r}")
        if not math.isfinite(self.c) or self.c == 0.0:
            raise InvalidParameterError(f"c must be finite and non-zero, got {self.c!r}")
        if not math.isfinite(self.nu):
            raise InvalidParameterError(f"nu must be finite, got {self.nu!r}")
        object.__setattr__(self, "a_gain", self.k ** (-(self.nu ** 2) / 2.0))


@dataclass(frozen=True)
class ChirpletParams:
    """Re-parameterized Altes chirplet {omega0, omega_c, lam} at cutoff level ``kc_level``."""

    omega0: float
    omega_c: float
    lam: float
    kc_level: float = DEFAULT_KC

    def __post_init__(self):
        for name in ("omega0", "omega_c", "lam", "kc_level"):
            if not math.isfinite(getattr(self, name)):
                raise InvalidParameterError(f"{name} must be finite")
        if self.omega0 <= 0.0:
            raise InvalidParameterError(f"omega0 must be > 0, got {self.omega0!r}")
        if self.omega_c <= self.omega0:
            raise InvalidParameterError(
                f"omega_c must exceed omega0 (got omega_c={self.omega_c!r}, omega0={self.omega0!r})"
            )
        if self.lam <= 0.0:
            raise InvalidParameterError(f"lam must be > 0, got {self.lam!r}")
        if self.lam == 1.0:
            raise SingularChirpRateError("chirp rate lam = 1 is singular")
        if not 0.0 < self.kc_level < 1.0:
            raise InvalidParameterError(f"kc_level must lie in (0, 1), got {self.kc_level!r}")

    @classmethod
    def from_bandwidth(cls, omega0: float, bandwidth: float, lam: float, kc_level: float = DEFAULT_KC):
        return cls(omega0, bandwidth_to_cutoff(omega0, bandwidth), lam, kc_level)

    @classmethod
    def from_kappa(cls, omega0: float, kappa_c: float, lam: float, kc_level: float = DEFAULT_KC):
        if kappa_c <= 0.0:
            raise InvalidParameterError(f"kappa_c must be > 0, got {kappa_c!r}")
        omega_c = omega0 * math.exp(math.sqrt(-math.log(kc_level) / kappa_c))
        return cls(omega0, omega_c, lam, kc_level)

    @property
    def kappa_c(self) -> float:
        return -math.log(self.kc_level) / math.log(self.omega_c / self.omega0) ** 2

    @property
    def omega_c_lower(self) -> float:
        return self.omega0 ** 2 / self.omega_c

    @property
    def bandwidth(self) -> float:
        return self.omega0 * (self.omega_c / self.omega0 - self.omega0 / self.omega_c)

    @property
    def k(self) -> float:
        """Intrinsic self-similarity ratio exp(1 / (2 kappa_c))."""
        return math.exp(1.0 / (2.0 * self.kappa_c))

    def reciprocal(self) -> "ChirpletParams":
        """Same chirplet with chirp rate 1/lam (time-reversed, conjugated)."""
        return ChirpletParams(self.omega0, self.omega_c, 1.0 / self.lam, self.kc_level)


@dataclass(frozen=True)
class Spectrum:
    """One-sided spectrum on the grid w_i = i * domega, i = 0 .. n_fft/2."""

    values: np.ndarray
    domega: float
    n_fft: int

    @property
    def omega(self) -> np.ndarray:
        return np.arange(len(self.values)) * self.domega


@dataclass(frozen=True)
class AnalyticSignal:
    samples: np.ndarray
    dt: float = 1.0

    def __len__(self):
        return len(self.samples)

    @property
    def energy(self) -> float:
        return float(np.sum(np.abs(self.samples) ** 2) * self.dt)


def classic_to_modern(p: ClassicAltesParams, kc_level: float = DEFAULT_KC) -> ChirpletParams:
    if not 0.0 < kc_level < 1.0:
        raise InvalidParameterError(f"kc_level must lie in (0, 1), got {kc_level!r}")
    log_k = math.log(p.k)
    omega0 = p.k ** p.nu
    kappa_c = 1.0 / (2.0 * log_k)
    lam = math.exp(log_k / p.c)
    omega_c = omega0 * math.exp(math.sqrt(-math.log(kc_level) / kappa_c))
    return ChirpletParams(omega0, omega_c, lam, kc_level)


def modern_to_classic(p: ChirpletParams) -> ClassicAltesParams:
    if p.lam == 1.0:
        raise SingularChirpRateError("chirp rate lam = 1 is singular")
    kappa_c = p.kappa_c
    nu = 2.0 * kappa_c * math.log(p.omega0)
    k = math.exp(1.0 / (2.0 * kappa_c))
    c = math.log(k) / math.log(p.lam)
    return ClassicAltesParams(nu=nu, k=k, c=c)


def bandwidth_to_cutoff(omega0: float, b: float) -> float:
    """Upper cutoff giving -kc bandwidth ``b`` around ``omega0``.

    Solves w**2 - b*w - omega0**2 = 0 for the positive root.
    """
    if omega0 <= 0.0 or b <= 0.0:
        raise InvalidParameterError("omega0 and bandwidth must be positive")
    half = 0.5 * b
    return half + math.sqrt(half * half + omega0 * omega0)


def magnitude_response(p: ChirpletParams, omega: float) -> float:
    """log|U(omega)| = -kappa_c * log(omega / omega0)**2."""
    if omega <= 0.0:
        raise DomainError("log-magnitude is undefined for omega <= 0")
    return -p.kappa_c * math.log(omega / p.omega0) ** 2


def response(p: ChirpletParams, omega) -> np.ndarray:
    """Closed-form U(omega) evaluated elementwise; zero for omega <= 0."""
    omega = np.asarray(omega, dtype=float)
    out = np.zeros(omega.shape, dtype=complex)
    pos = omega > 0.0
    w = omega[pos]
    log_w = np.log(w)
    log_mag = -p.kappa_c * (log_w - math.log(p.omega0)) ** 2
    phase = 2.0 * np.pi * log_w / math.log(p.lam)
    out[pos] = np.exp(log_mag + 1j * phase)
    return out


def homogeneity_constant(p: ChirpletParams, n: float) -> complex:
    """C(n) such that w**n U(w) = C(n) U(w / k**n) for the intrinsic k.

    The phase term is exp(+2j*pi*n*c); see ``tests/test_chirplet.py`` for the
    check that the opposite sign does not satisfy the identity.
    """
    classic = modern_to_classic(p)
    mag = classic.k ** (n * classic.nu + n * n / 2.0)
    return mag * complex(np.exp(2j * np.pi * n * classic.c))


def _check_nfft(n_fft: int) -> None:
    if n_fft < 8 or n_fft & (n_fft - 1):
        raise InvalidParameterError(f"n_fft must be a power of two >= 8, got {n_fft!r}")


def synth_spectrum(p: ChirpletParams, n_fft: int) -> Spectrum:
    """Sample U on the one-sided grid [0, pi] with n_fft/2 + 1 points."""
    _check_nfft(n_fft)
    half = n_fft // 2
    domega = np.pi / half
    omega = np.arange(half + 1) * domega
    values = response(p, omega)
    values[0] = 0.0
    return Spectrum(values=values, domega=domega, n_fft=n_fft)


def synth_time(p: ChirpletParams, n_fft: int) -> AnalyticSignal:
    """Inverse DFT of the one-sided spectrum with zeros on (pi, 2*pi)."""
    spec = synth_spectrum(p, n_fft)
    padded = np.zeros(n_fft, dtype=complex)
    padded[: len(spec.values)] = spec.values
    return AnalyticSignal(samples=np.fft.ifft(padded), dt=1.0)
