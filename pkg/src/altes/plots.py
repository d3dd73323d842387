"""Optional figures rendered from the same arrays the CSV writers use."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402


def _db(x: np.ndarray, floor: float = -120.0) -> np.ndarray:
    with np.errstate(divide="ignore"):
        return np.maximum(20.0 * np.log10(np.abs(x)), floor)


def synth_figure(path, spectrum, sig) -> None:
    fig, ax = plt.subplots(3, 1, figsize=(7, 8))
    w = spectrum.omega / np.pi
    ax[0].plot(w, _db(spectrum.values))
    ax[0].set(xlabel="frequency (x pi rad/sample)", ylabel="|U| (dB)", ylim=(-60, 5))
    ax[1].plot(w, np.unwrap(np.angle(spectrum.values)))
    ax[1].set(xlabel="frequency (x pi rad/sample)", ylabel="phase (rad)")
    u = np.fft.fftshift(sig.samples)
    t = np.arange(len(u)) - len(u) // 2
    ax[2].plot(t, u.real, lw=0.7, label="real")
    ax[2].plot(t, np.abs(u), "k", lw=1.0, label="envelope")
    ax[2].set(xlabel="sample", ylabel="u")
    ax[2].legend(loc="upper right")
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def sweep_figure(path, records, result) -> None:
    tau = np.array([r.delay_spread for r in records])
    b = np.array([r.bandwidth for r in records]) / np.pi
    lam = np.array([r.params.lam for r in records])
    fig, ax = plt.subplots(figsize=(7, 5))
    sc = ax.scatter(tau, b, c=lam, s=4, cmap="viridis")
    front = result.frontier_records
    ax.plot([r.delay_spread for r in front], [r.bandwidth / np.pi for r in front], "r.-", lw=1)
    ax.set(xscale="log", xlabel="delay spread (samples)", ylabel="bandwidth (x pi)")
    fig.colorbar(sc, label="lambda")
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def benchmark_figure(path, sig, truth, spectrogram, morlet, hct_sc) -> None:
    fig, ax = plt.subplots(4, 1, figsize=(8, 11))
    ax[0].plot(sig.samples.real, lw=0.4)
    for c in truth.chirp_centers:
        ax[0].axvline(c, color="k", ls="--", lw=0.8)
    ax[0].set(ylabel="signal")
    ax[1].contourf(_db(spectrogram.magnitudes[: spectrogram.window_len // 2]), 20)
    ax[1].set(ylabel="STFT bin")
    ax[2].contourf(np.arange(morlet.coefficients.shape[1]), morlet.scales, _db(morlet.coefficients, -80), 20)
    ax[2].set(ylabel="Morlet scale")
    ax[3].contourf(np.arange(hct_sc.coefficients.shape[1]), hct_sc.scales, _db(hct_sc.coefficients, -80), 20)
    ax[3].set(ylabel="HCT scale", xlabel="shift (samples)")
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
