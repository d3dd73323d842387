"""Hyperbolic chirplet transform and baseline time-frequency transforms.

All wavelet transforms are evaluated in the frequency domain: for each scale
``a`` the dilated wavelet spectrum Psi(a*w) is re-evaluated from its closed
form on the signal's DFT grid, multiplied into the signal spectrum, and one
inverse FFT yields the coefficients at every integer shift.
"""

from __future__ import annotations

import math
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Protocol, Sequence

import numpy as np

from altes.chirplet import AnalyticSignal, ChirpletParams, response
from altes.errors import DegenerateScaleError, InvalidParameterError
from altes.properties import analytic_energy, fit_fft_size

# sigma = SIGMA_FRAC * center makes the -40 dB width equal to that of the octave [c/sqrt2, c*sqrt2]
MORLET_SIGMA_FRAC = (math.sqrt(2.0) - 1.0 / math.sqrt(2.0)) / (2.0 * math.sqrt(2.0 * math.log(100.0)))


class Wavelet(Protocol):
    wavelet_id: str
    upper_cutoff: float

    def spectrum(self, omega: np.ndarray) -> np.ndarray: ...


@dataclass(frozen=True)
class Scalogram:
    coefficients: np.ndarray
    scales: np.ndarray
    shifts: np.ndarray
    wavelet_id: str

    def __post_init__(self):
        if self.coefficients.shape != (len(self.scales), len(self.shifts)):
            raise ValueError("coefficient grid does not match axis lengths")
        if len(self.scales) and (np.any(self.scales <= 0) or np.any(np.diff(self.scales) <= 0)):
            raise ValueError("scales must be positive and strictly increasing")

    @property
    def magnitude(self) -> np.ndarray:
        return np.abs(self.coefficients)


@dataclass(frozen=True)
class Spectrogram:
    magnitudes: np.ndarray  # (frequency bin, frame)
    frame_hop: int
    window_len: int

    @property
    def bin_frequencies(self) -> np.ndarray:
        return 2.0 * np.pi * np.arange(self.window_len) / self.window_len


@dataclass(frozen=True)
class ScaleLawReport:
    base_scale: float
    multipliers: list
    relative_errors: list
    integral_form_error: float = field(default=float("nan"))


@dataclass(frozen=True)
class AltesWavelet:
    """Altes chirplet as an analyzing wavelet.

    ``normalize`` scales the spectrum to unit time-domain energy using the
    closed-form energy; ``center_shift`` multiplies by exp(j*w*center_shift)
    so that an envelope peak at ``center_shift`` moves to t = 0.
    """

    params: ChirpletParams
    normalize: bool = True
    center_shift: float = 0.0
    wavelet_id: str = "altes"

    @property
    def upper_cutoff(self) -> float:
        return self.params.omega_c

    def spectrum(self, omega: np.ndarray) -> np.ndarray:
        values = response(self.params, omega)
        if self.center_shift:
            values = values * np.exp(1j * omega * self.center_shift)
        if self.normalize:
            values = values / math.sqrt(analytic_energy(self.params))
        return values


@dataclass(frozen=True)
class MorletWavelet:
    """Analytic complex Morlet: Gaussian bump at ``center_freq`` for w > 0 only."""

    center_freq: float
    sigma_frac: float = MORLET_SIGMA_FRAC
    kc_level: float = 0.01
    wavelet_id: str = "morlet"

    @property
    def sigma(self) -> float:
        return self.sigma_frac * self.center_freq

    @property
    def upper_cutoff(self) -> float:
        return self.center_freq + self.sigma * math.sqrt(-2.0 * math.log(self.kc_level))

    def spectrum(self, omega: np.ndarray) -> np.ndarray:
        omega = np.asarray(omega, dtype=float)
        out = np.zeros(omega.shape, dtype=complex)
        pos = omega > 0.0
        out[pos] = np.exp(-((omega[pos] - self.center_freq) ** 2) / (2.0 * self.sigma ** 2))
        return out


def resolve_workers(requested: int | None = None) -> int:
    """Thread count: explicit request, else ALTES_THREADS, where 0 means all cores."""
    if requested is None:
        requested = int(os.environ.get("ALTES_THREADS", "0") or 0)
    return requested if requested > 0 else (os.cpu_count() or 1)


def signal_omega(n: int) -> np.ndarray:
    """Angular frequency of each DFT bin, negative above Nyquist."""
    return 2.0 * np.pi * np.fft.fftfreq(n)


def cwt_frequency_domain(
    signal: AnalyticSignal,
    wavelet: Wavelet,
    scales: Sequence[float],
    workers: int | None = None,
) -> Scalogram:
    """C(a, b) = sqrt(a)/(2 pi) * integral S(w) Psi*(a w) exp(j w b) dw at all integer b."""
    x = np.asarray(signal.samples, dtype=complex)
    n = len(x)
    if n & (n - 1) or n == 0:
        raise InvalidParameterError("signal length must be a power of two")
    scales = np.asarray(scales, dtype=float)
    if np.any(scales <= 0):
        raise InvalidParameterError("scales must be positive")
    first_bin = 2.0 * np.pi / n
    for a in scales:
        if wavelet.upper_cutoff / a < first_bin:
            raise DegenerateScaleError(f"scale {a} puts the wavelet below the first frequency bin")

    spec = np.fft.fft(x)
    omega = signal_omega(n)

    def row(a: float) -> np.ndarray:
        psi = wavelet.spectrum(a * omega)
        return math.sqrt(a) * np.fft.ifft(spec * np.conj(psi))

    if len(scales) > 1 and resolve_workers(workers) > 1:
        with ThreadPoolExecutor(max_workers=resolve_workers(workers)) as pool:
            rows = list(pool.map(row, scales))
    else:
        rows = [row(a) for a in scales]
    coeffs = np.array(rows) if rows else np.zeros((0, n), dtype=complex)
    return Scalogram(
        coefficients=coeffs,
        scales=scales,
        shifts=np.arange(n) * signal.dt,
        wavelet_id=wavelet.wavelet_id,
    )


def envelope_peak_time(p: ChirpletParams) -> float:
    """Envelope peak of the mother chirplet in samples, refined by a log-parabola fit.

    Negative values mean the peak sits before t = 0 in the circular IFFT frame.
    """
    n, sig, _ = fit_fft_size(p, start=1024)
    env = np.abs(sig.samples)
    i = int(np.argmax(env))
    y0, y1, y2 = np.log(env[[i - 1, i, (i + 1) % n]])
    denom = y0 - 2.0 * y1 + y2
    t = i + (0.5 * (y0 - y2) / denom if denom != 0 else 0.0)
    return t - n if t >= n / 2 else t


def _warn_design_bounds(p: ChirpletParams) -> None:
    from altes.sweep import table2_gate

    for verdict in table2_gate(p):
        if not verdict.passed:
            warnings.warn(f"chirplet outside discrete-time bounds: {verdict.message}", stacklevel=3)


def hct_wavelet(p: ChirpletParams) -> AltesWavelet:
    """Unit-energy Altes wavelet centred on its envelope peak."""
    return AltesWavelet(params=p, normalize=True, center_shift=envelope_peak_time(p))


def hct(signal: AnalyticSignal, p: ChirpletParams, scales: Sequence[float], workers: int | None = None) -> Scalogram:
    """Hyperbolic chirplet transform with the wavelet peak aligned to zero shift."""
    _warn_design_bounds(p)
    return cwt_frequency_domain(signal, hct_wavelet(p), scales, workers=workers)


def scale_factor(p: ChirpletParams, m) -> np.ndarray:
    """g(m) = m**(1 + 2 kappa_c log omega0) * exp(2j pi log m / log lam)."""
    m = np.asarray(m, dtype=float)
    expo = 1.0 + 2.0 * p.kappa_c * math.log(p.omega0)
    return m ** expo * np.exp(2j * np.pi * np.log(m) / math.log(p.lam))


def scale_law_fast_path(
    signal: AnalyticSignal,
    p: ChirpletParams,
    base_scale: float,
    multipliers: Sequence[float],
) -> tuple[Scalogram, ScaleLawReport]:
    """Rows at m * base_scale predicted as g(m) times the base row.

    The prediction is compared against the direct transform at each scale;
    the report carries the errors and asserts nothing about them.
    """
    if base_scale <= 0 or any(m <= 0 for m in multipliers):
        raise InvalidParameterError("base_scale and multipliers must be positive")
    mults = [float(m) for m in multipliers]
    wavelet = hct_wavelet(p)
    base = cwt_frequency_domain(signal, wavelet, [base_scale]).coefficients[0]

    errors = []
    predicted = {}
    for m in mults:
        row = complex(scale_factor(p, m)) * base
        direct = cwt_frequency_domain(signal, wavelet, [m * base_scale]).coefficients[0]
        denom = np.max(np.abs(direct))
        errors.append(float(np.max(np.abs(row - direct)) / denom) if denom > 0 else 0.0)
        predicted[m] = row

    # base row written as g(a) times the w-weighted integral, without centring
    x = np.asarray(signal.samples, dtype=complex)
    omega = signal_omega(len(x))
    plain = AltesWavelet(params=p, normalize=True)
    integral = np.fft.ifft(np.fft.fft(x) * omega * np.conj(plain.spectrum(omega)))
    integral_row = complex(scale_factor(p, base_scale)) * integral
    plain_base = cwt_frequency_domain(signal, plain, [base_scale]).coefficients[0]
    denom = np.max(np.abs(plain_base))
    integral_err = float(np.max(np.abs(integral_row - plain_base)) / denom) if denom > 0 else 0.0

    order = sorted(set(mults))
    sc = Scalogram(
        coefficients=np.array([predicted[m] for m in order]),
        scales=np.array(order) * base_scale,
        shifts=np.arange(len(x)) * signal.dt,
        wavelet_id="altes",
    )
    report = ScaleLawReport(
        base_scale=float(base_scale),
        multipliers=mults,
        relative_errors=errors,
        integral_form_error=integral_err,
    )
    return sc, report


def morlet_cwt(
    signal: AnalyticSignal,
    center_freq: float,
    scales: Sequence[float],
    workers: int | None = None,
) -> Scalogram:
    """Complex Morlet CWT.

    ``center_freq`` may exceed pi provided every dilated centre
    ``center_freq / a`` stays below Nyquist.
    """
    scales = np.asarray(scales, dtype=float)
    if center_freq <= 0 or (len(scales) and center_freq / scales.min() >= np.pi):
        raise InvalidParameterError("dilated Morlet centre frequency must lie in (0, pi)")
    return cwt_frequency_domain(signal, MorletWavelet(center_freq), scales, workers=workers)


def stft(signal: AnalyticSignal, window_len: int = 128, hop: int | None = None) -> Spectrogram:
    """Hamming-windowed STFT magnitudes over full-band (two-sided) bins."""
    x = np.asarray(signal.samples, dtype=complex)
    if window_len <= 0 or window_len & (window_len - 1):
        raise InvalidParameterError("window_len must be a power of two")
    if hop is None:
        hop = window_len // 2
    if not 0 < hop <= window_len:
        raise InvalidParameterError("hop must lie in (0, window_len]")
    if len(x) < window_len:
        raise InvalidParameterError("signal shorter than the window")
    window = np.hamming(window_len)
    starts = np.arange(0, len(x) - window_len + 1, hop)
    frames = np.stack([x[s : s + window_len] * window for s in starts], axis=1)
    return Spectrogram(magnitudes=np.abs(np.fft.fft(frames, axis=0)), frame_hop=hop, window_len=window_len)
