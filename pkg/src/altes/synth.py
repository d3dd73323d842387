"""Ground-truthed synthetic signals: log-periodic chirps, a tone, and calibrated noise."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from altes.chirplet import AnalyticSignal, ChirpletParams, synth_time
from altes.errors import InvalidParameterError
from altes.properties import fit_fft_size

RNG_ALGORITHM = "numpy.random.Generator(PCG64)"
DEFAULT_SEED = 20181001


@dataclass(frozen=True)
class ChirpPlacement:
    params: ChirpletParams
    center: int
    amplitude: float = 1.0


@dataclass(frozen=True)
class BenchmarkSpec:
    """Recipe for a benchmark signal.

    ``snr_db=None`` disables noise.  SNR is measured against the summed clean
    signal (chirps plus tone).
    """

    chirps: tuple
    tone_freq: float = math.pi / 3
    tone_amplitude: float = 0.05
    snr_db: float | None = 0.0
    total_len: int = 4096
    seed: int = DEFAULT_SEED

    def __post_init__(self):
        if self.total_len <= 0:
            raise InvalidParameterError("total_len must be positive")
        for c in self.chirps:
            if not 0 <= c.center < self.total_len:
                raise InvalidParameterError(f"chirp centre {c.center} outside [0, {self.total_len})")

    def to_dict(self) -> dict:
        return {
            "chirps": [
                {
                    "omega0": c.params.omega0,
                    "omega_c": c.params.omega_c,
                    "lambda": c.params.lam,
                    "kc_level": c.params.kc_level,
                    "center": c.center,
                    "amplitude": c.amplitude,
                }
                for c in self.chirps
            ],
            "tone_freq": self.tone_freq,
            "tone_amplitude": self.tone_amplitude,
            "snr_db": self.snr_db,
            "total_len": self.total_len,
            "seed": self.seed,
            "rng": RNG_ALGORITHM,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "BenchmarkSpec":
        known = {"chirps", "tone_freq", "tone_amplitude", "snr_db", "total_len", "seed", "rng"}
        unknown = set(d) - known
        if unknown:
            raise InvalidParameterError(f"unknown benchmark keys: {sorted(unknown)}")
        chirps = []
        for c in d.get("chirps", []):
            extra = set(c) - {"omega0", "omega_c", "lambda", "kc_level", "center", "amplitude"}
            if extra:
                raise InvalidParameterError(f"unknown chirp keys: {sorted(extra)}")
            p = ChirpletParams(float(c["omega0"]), float(c["omega_c"]), float(c["lambda"]), float(c.get("kc_level", 0.01)))
            chirps.append(ChirpPlacement(p, int(c["center"]), float(c.get("amplitude", 1.0))))
        kwargs = {k: d[k] for k in ("tone_freq", "tone_amplitude", "snr_db", "total_len", "seed") if k in d}
        return cls(chirps=tuple(chirps), **kwargs)


@dataclass(frozen=True)
class GroundTruth:
    chirp_centers: list
    clean_signal: AnalyticSignal = field(repr=False)

    def to_dict(self) -> dict:
        return {"chirp_centers": [int(c) for c in self.chirp_centers], "length": len(self.clean_signal)}


def make_lp_chirp(p: ChirpletParams, n_fft: int | None = None, center: int | None = None) -> AnalyticSignal:
    """Unit-energy chirplet with its envelope peak at ``center`` (default n_fft // 2).

    ``n_fft=None`` picks the smallest size that holds the -kc delay spread.
    """
    if n_fft is None:
        n_fft, sig, _ = fit_fft_size(p)
    else:
        sig = synth_time(p, n_fft)
    u = sig.samples / math.sqrt(np.sum(np.abs(sig.samples) ** 2))
    if center is None:
        center = n_fft // 2
    peak = int(np.argmax(np.abs(u)))
    return AnalyticSignal(samples=np.roll(u, center - peak), dt=sig.dt)


def tone(freq: float, n: int, amplitude: float = 1.0) -> np.ndarray:
    return amplitude * np.exp(1j * freq * np.arange(n))


def complex_white_noise(rng: np.random.Generator, n: int) -> np.ndarray:
    """Unit-power circular complex Gaussian noise."""
    return (rng.standard_normal(n) + 1j * rng.standard_normal(n)) / math.sqrt(2.0)


def make_benchmark(spec: BenchmarkSpec) -> tuple[AnalyticSignal, GroundTruth]:
    n = spec.total_len
    clean = np.zeros(n, dtype=complex)
    for c in spec.chirps:
        m, _, loc = fit_fft_size(c.params)
        if loc.delay_spread > n:
            raise InvalidParameterError(f"total_len {n} shorter than chirp delay spread {loc.delay_spread:.0f}")
        u = make_lp_chirp(c.params, m).samples
        # chirp peak sits at m // 2; drop samples outside the record
        start = c.center - m // 2
        lo, hi = max(start, 0), min(start + m, n)
        clean[lo:hi] += c.amplitude * u[lo - start : hi - start]
    clean += tone(spec.tone_freq, n, spec.tone_amplitude)

    signal = clean.copy()
    if spec.snr_db is not None and math.isfinite(spec.snr_db):
        rng = np.random.default_rng(spec.seed)
        noise = complex_white_noise(rng, n)
        p_clean = np.mean(np.abs(clean) ** 2)
        p_target = p_clean / 10.0 ** (spec.snr_db / 10.0)
        noise *= math.sqrt(p_target / np.mean(np.abs(noise) ** 2))
        signal = clean + noise

    truth = GroundTruth(
        chirp_centers=[c.center for c in spec.chirps],
        clean_signal=AnalyticSignal(clean),
    )
    return AnalyticSignal(signal), truth


def measured_snr_db(signal: AnalyticSignal, truth: GroundTruth) -> float:
    clean = truth.clean_signal.samples
    noise = signal.samples - clean
    return 10.0 * math.log10(np.mean(np.abs(clean) ** 2) / np.mean(np.abs(noise) ** 2))


def default_benchmark(seed: int = DEFAULT_SEED, snr_db: float | None = 0.0) -> BenchmarkSpec:
    """Three chirps at distinct chirp rates, a pi/3 tone and 0 dB noise.

    All three sit inside the discrete-time design bounds and none uses the
    analyzing chirp rate of 1/2.
    """
    chirps = (
        ChirpPlacement(ChirpletParams(math.pi / 6, math.pi, 0.45), center=700),
        ChirpPlacement(ChirpletParams(math.pi / 7, math.pi, 0.35), center=2000),
        ChirpPlacement(ChirpletParams(math.pi / 5, math.pi, 0.4), center=3300),
    )
    return BenchmarkSpec(chirps=chirps, snr_db=snr_db, seed=seed)
