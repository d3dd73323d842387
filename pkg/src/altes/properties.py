"""Wavelet property measurements for the Altes chirplet.

Closed forms (energy, admissibility constant, regularity integral) sit next to
the numerical measurements used to check them and to chart localization:
threshold bandwidth, threshold delay spread and oscillation count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np
from scipy.signal import resample

from altes.chirplet import (
    DEFAULT_KC,
    AnalyticSignal,
    ChirpletParams,
    Spectrum,
    response,
    synth_spectrum,
    synth_time,
)
from altes.errors import AdvisoryError, AltesError, LocalizationError

MAX_NFFT = 2 ** 16
GUARD_SAMPLES = 4
OSCILLATION_OVERSAMPLE = 8


@dataclass(frozen=True)
class TimeLocalization:
    """Threshold time localization of an envelope.

    Times are in the input's own sample frame (multiplied by ``dt``); because
    the inverse FFT wraps circularly, ``tau_minus`` may be negative.
    """

    tau_minus: float
    tau_plus: float
    tau_peak: float
    delay_spread: float
    truncated: bool = False


@dataclass(frozen=True)
class WaveletDiagnostics:
    energy: float
    admissibility_constant: float
    bandwidth_measured: float
    oscillation_count: float
    vanishing_moment_order_verified: int


def analytic_energy(p: ChirpletParams) -> float:
    """(1/2pi) * integral |U|^2 dw = omega0 / sqrt(8 pi kappa_c) * exp(1 / (8 kappa_c))."""
    kappa = p.kappa_c
    return p.omega0 / math.sqrt(8.0 * math.pi * kappa) * math.exp(1.0 / (8.0 * kappa))


def analytic_admissibility(p: ChirpletParams) -> float:
    """integral_0^inf |U|^2 / w dw = sqrt(pi / (2 kappa_c)); independent of lam."""
    return math.sqrt(math.pi / (2.0 * p.kappa_c))


def _log_moment(p: ChirpletParams, alpha: float) -> float:
    # log of integral_0^inf w**alpha * |U(w)| dw
    kappa = p.kappa_c
    return (alpha + 1.0) * math.log(p.omega0) + 0.5 * math.log(math.pi / kappa) + (1.0 + alpha) ** 2 / (4.0 * kappa)


def regularity_integral(p: ChirpletParams, alpha: float) -> float:
    """integral |U(w)| (1 + w**alpha) dw, evaluated in the log domain."""
    if alpha < 0.0:
        raise ValueError("alpha must be >= 0")
    a, b = _log_moment(p, 0.0), _log_moment(p, alpha)
    hi = max(a, b)
    return math.exp(hi) * (math.exp(a - hi) + math.exp(b - hi))


# -- vanishing moments -------------------------------------------------------

_PROBES = 10.0 ** -np.arange(1, 7)  # 1e-1 ... 1e-6
_DEEPEST_PROBE = 1e-30


def _central_difference(f: Callable, omega: float, order: int, h: float) -> complex:
    if order == 0:
        return complex(f(np.array([omega]))[0])
    k = np.arange(order + 1)
    nodes = omega + (k - order / 2.0) * h
    weights = np.array([(-1) ** (order - i) * math.comb(order, i) for i in k], dtype=float)
    return complex(np.dot(weights, f(nodes)) / h ** order)


def _derivative_at(f: Callable, omega: float, order: int) -> float:
    h = omega / (order + 1.0)
    coarse = _central_difference(f, omega, order, h)
    fine = _central_difference(f, omega, order, h / 2.0)
    return abs((4.0 * fine - coarse) / 3.0) if order else abs(fine)


def derivative_near_zero(target, order: int, probes=_PROBES) -> np.ndarray:
    """|d^m U / dw^m| estimated at each probe frequency (Richardson-extrapolated)."""
    f = _as_response(target)
    return np.array([_derivative_at(f, w, order) for w in probes])


def _as_response(target) -> Callable:
    if isinstance(target, ChirpletParams):
        return lambda w: response(target, w)
    return target


def derivative_limit_at_dc(target, order: int, tol: float = 1e-8) -> tuple[float, float]:
    """Last two estimates of the derivative along probes shrinking towards DC.

    The fixed decade probes are always evaluated.  Wideband chirplets still
    carry large high-order derivatives at 1e-6, so probing then continues a
    decade at a time (down to 1e-30) until an estimate drops below ``tol``.
    """
    f = _as_response(target)
    mags = list(derivative_near_zero(f, order))
    w = _PROBES[-1]
    while mags[-1] >= tol and w > _DEEPEST_PROBE:
        w /= 10.0
        mags.append(_derivative_at(f, w, order))
    return mags[-1], mags[-2]


def vanishing_moments_check(
    target: Union[ChirpletParams, Callable],
    max_order: int,
    tol: float = 1e-8,
) -> int:
    """Highest order M <= max_order with d^m U/dw^m -> 0 at DC for all m in 0..M.

    ``target`` is chirplet parameters or any vectorized one-sided frequency
    response.  Returns 0 when not even the order-0 value vanishes.
    """
    if max_order > 12:
        raise ValueError("max_order must be <= 12")
    f = _as_response(target)
    verified = 0
    for m in range(max_order + 1):
        limit, previous = derivative_limit_at_dc(f, m, tol)
        approaching = limit <= previous or previous < tol
        if not (limit < tol and approaching):
            break
        verified = m
    return verified


# -- bandwidth ----------------------------------------------------------------


def _crossing(x0: float, x1: float, y0: float, y1: float, level: float) -> float:
    """Abscissa where the segment crosses ``level``; log-linear when both ends are positive."""
    if y0 > 0.0 and y1 > 0.0 and y0 != y1:
        t = (math.log(level) - math.log(y0)) / (math.log(y1) - math.log(y0))
    elif y0 != y1:
        t = (level - y0) / (y1 - y0)
    else:
        t = 0.0
    return x0 + t * (x1 - x0)


def bandwidth_crossings(s: Spectrum, kc_level: float = DEFAULT_KC) -> tuple[float, float]:
    """Outermost frequencies where |U| crosses ``kc_level``."""
    mag = np.abs(s.values)
    omega = s.omega
    peak = mag.max()
    if kc_level >= peak:
        w = float(omega[np.argmax(mag)])
        return w, w
    above = np.nonzero(mag >= kc_level)[0]
    lo, hi = int(above[0]), int(above[-1])
    if lo == 0:
        raise LocalizationError("lower crossing not found above DC")
    if hi == len(mag) - 1 and mag[hi] > kc_level * (1.0 + 1e-9):
        raise LocalizationError("spectrum exceeds the cutoff level at Nyquist; not band-limited")
    w_lo = _crossing(omega[lo - 1], omega[lo], mag[lo - 1], mag[lo], kc_level)
    if hi == len(mag) - 1:
        w_hi = float(omega[hi])
    else:
        w_hi = _crossing(omega[hi], omega[hi + 1], mag[hi], mag[hi + 1], kc_level)
    return w_lo, w_hi


def measure_bandwidth(s: Spectrum, kc_level: float = DEFAULT_KC) -> float:
    lo, hi = bandwidth_crossings(s, kc_level)
    return hi - lo


# -- delay spread and oscillations ------------------------------------------


def measure_delay_spread(
    sig: AnalyticSignal,
    kc_level: float = DEFAULT_KC,
    guard: int = GUARD_SAMPLES,
) -> TimeLocalization:
    """Outermost -kc crossings of the envelope relative to its peak.

    The envelope is circularly re-centered on its peak first, so the result
    does not depend on where the IFFT placed the waveform.
    """
    env = np.abs(np.asarray(sig.samples))
    n = len(env)
    if n == 0 or not np.any(env > 0.0):
        raise AltesError("cannot localize an all-zero signal")
    peak = int(np.argmax(env))
    mid = n // 2
    env = np.roll(env, mid - peak)
    thr = kc_level * env[mid]
    above = np.nonzero(env >= thr)[0]
    lo, hi = int(above[0]), int(above[-1])
    t_lo = _crossing(lo, lo - 1, env[lo], env[lo - 1], thr) if lo > 0 else 0.0
    t_hi = _crossing(hi, hi + 1, env[hi], env[hi + 1], thr) if hi < n - 1 else float(n - 1)
    truncated = lo < guard or hi > n - 1 - guard
    dt = sig.dt
    offset = peak - mid
    return TimeLocalization(
        tau_minus=(t_lo + offset) * dt,
        tau_plus=(t_hi + offset) * dt,
        tau_peak=peak * dt,
        delay_spread=(t_hi - t_lo) * dt,
        truncated=truncated,
    )


def count_oscillations(sig: AnalyticSignal, loc: TimeLocalization, oversample: int = OSCILLATION_OVERSAMPLE) -> float:
    """Full cycles of the unwrapped phase inside [tau_minus, tau_plus].

    The signal is first band-limited interpolated by ``oversample``.  Near
    Nyquist the phase moves by almost pi per sample, so unwrapping the raw
    samples can drop whole cycles; it also lets the window ends be fractional.
    """
    n = len(sig)
    if math.floor(loc.tau_plus / sig.dt) - math.ceil(loc.tau_minus / sig.dt) + 1 < 4:
        raise LocalizationError("window shorter than 4 samples")
    fine = resample(np.asarray(sig.samples, dtype=complex), n * oversample)
    first = math.ceil(loc.tau_minus / sig.dt * oversample)
    last = math.floor(loc.tau_plus / sig.dt * oversample)
    idx = np.arange(first, last + 1) % len(fine)
    phase = np.unwrap(np.angle(fine[idx]))
    return float(abs(phase[-1] - phase[0]) / (2.0 * math.pi))


def fit_fft_size(
    p: ChirpletParams,
    start: int = 256,
    max_nfft: int = MAX_NFFT,
    kc_level: float | None = None,
) -> tuple[int, AnalyticSignal, TimeLocalization]:
    """Grow n_fft by doubling until the -kc envelope fits with guard samples.

    Returns the last attempt even if it is still truncated at ``max_nfft``;
    callers decide whether that is an error.
    """
    level = p.kc_level if kc_level is None else kc_level
    n = start
    while True:
        sig = synth_time(p, n)
        loc = measure_delay_spread(sig, level)
        if not loc.truncated or n >= max_nfft:
            return n, sig, loc
        n *= 2


def next_pow2(x: float) -> int:
    n = 1
    while n < x:
        n *= 2
    return n


def advise_fft_size(p: ChirpletParams, max_nfft: int = MAX_NFFT) -> int:
    """Smallest power of two holding the measured delay spread."""
    _, _, loc = fit_fft_size(p, start=1024, max_nfft=max_nfft)
    if loc.truncated or loc.delay_spread > max_nfft:
        raise AdvisoryError(f"delay spread exceeds the {max_nfft}-point limit")
    return next_pow2(loc.delay_spread)


def diagnose(p: ChirpletParams, n_fft: int = 4096, max_order: int = 10) -> WaveletDiagnostics:
    """Collect the closed-form and measured properties of one chirplet."""
    _, sig, loc = fit_fft_size(p)
    return WaveletDiagnostics(
        energy=analytic_energy(p),
        admissibility_constant=analytic_admissibility(p),
        bandwidth_measured=measure_bandwidth(synth_spectrum(p, n_fft), p.kc_level),
        oscillation_count=count_oscillations(sig, loc),
        vanishing_moment_order_verified=vanishing_moments_check(p, max_order),
    )
