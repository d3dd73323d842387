"""Numerical invariant suite for one chirplet parameter set.

Each check returns a dict with ``name``, ``passed`` (True, False, or None for
informational entries), a measured ``value`` and the ``tolerance`` it was held
to.  Quadrature oracles integrate on a logarithmic frequency grid and never
call the closed forms they check.
"""

from __future__ import annotations

import math

import numpy as np

from altes.chirplet import (
    AnalyticSignal,
    ChirpletParams,
    bandwidth_to_cutoff,
    classic_to_modern,
    homogeneity_constant,
    modern_to_classic,
    response,
    synth_spectrum,
    synth_time,
)
from altes.properties import (
    analytic_admissibility,
    analytic_energy,
    bandwidth_crossings,
    fit_fft_size,
    regularity_integral,
    vanishing_moments_check,
)
from altes.sweep import table2_gate
from altes.transform import scale_law_fast_path

HOMOGENEITY_ORDERS = (1.0, 2.0, 3.0, 0.5, -1.0)
SCALE_LAW_BASE = 1.0


def log_quadrature(f, lo: float = 1e-12, hi: float = 1e6, n: int = 400_001) -> float:
    """Trapezoid rule for integral_lo^hi f(w) dw after substituting w = e^x."""
    x = np.linspace(math.log(lo), math.log(hi), n)
    w = np.exp(x)
    return float(np.trapezoid(f(w) * w, x))


def quadrature_energy(p: ChirpletParams) -> float:
    return log_quadrature(lambda w: np.abs(response(p, w)) ** 2) / (2.0 * math.pi)


def quadrature_admissibility(p: ChirpletParams) -> float:
    return log_quadrature(lambda w: np.abs(response(p, w)) ** 2 / w)


def quadrature_regularity(p: ChirpletParams, alpha: float) -> float:
    return log_quadrature(lambda w: np.abs(response(p, w)) * (1.0 + w ** alpha))


def homogeneity_error(p: ChirpletParams, orders=HOMOGENEITY_ORDERS, n_fft: int = 4096) -> float:
    """Max relative error of w**n U(w) = C(n) U(w / k**n) over the positive grid."""
    omega = synth_spectrum(p, n_fft).omega[1:]
    k = p.k
    worst = 0.0
    for n in orders:
        lhs = omega ** n * response(p, omega)
        rhs = homogeneity_constant(p, n) * response(p, omega / k ** n)
        scale = np.maximum(np.abs(lhs), np.finfo(float).tiny)
        mask = np.abs(lhs) > 1e-250
        if np.any(mask):
            worst = max(worst, float(np.max(np.abs(lhs - rhs)[mask] / scale[mask])))
    return worst


def reciprocity_error(p: ChirpletParams, n_fft: int | None = None) -> float:
    """max |u_{1/lam}[n] - conj(u_lam[-n])| relative to the peak."""
    if n_fft is None:
        n_fft, _, _ = fit_fft_size(p)
    u = synth_time(p, n_fft).samples
    v = synth_time(p.reciprocal(), n_fft).samples
    mirrored = np.conj(np.roll(u[::-1], 1))
    return float(np.max(np.abs(v - mirrored)) / np.max(np.abs(u)))


def parseval_error(p: ChirpletParams, n_fft: int | None = None) -> float:
    if n_fft is None:
        n_fft, _, _ = fit_fft_size(p)
    s = synth_spectrum(p, n_fft)
    u = synth_time(p, n_fft).samples
    t_energy = np.sum(np.abs(u) ** 2)
    f_energy = np.sum(np.abs(s.values) ** 2) / n_fft
    return float(abs(t_energy - f_energy) / f_energy)


def _entry(name, passed, value, tolerance=None, **extra) -> dict:
    d = {"name": name, "passed": passed, "value": value, "tolerance": tolerance}
    d.update(extra)
    return d


def _rel(a: float, b: float) -> float:
    return abs(a - b) / abs(b)


def run_suite(p: ChirpletParams, n_fft: int = 4096, max_order: int = 10) -> list[dict]:
    out = []

    classic = modern_to_classic(p)
    back = classic_to_modern(classic, p.kc_level)
    err = max(_rel(back.omega0, p.omega0), _rel(back.omega_c, p.omega_c), _rel(back.lam, p.lam))
    out.append(_entry("conversion_round_trip", err < 1e-12, err, 1e-12))

    wc = bandwidth_to_cutoff(p.omega0, p.bandwidth)
    err = _rel(wc, p.omega_c)
    out.append(_entry("bandwidth_inversion", err < 1e-12, err, 1e-12))

    err = homogeneity_error(p)
    out.append(_entry("homogeneous_identity", err < 1e-9, err, 1e-9, orders=list(HOMOGENEITY_ORDERS)))

    err = _rel(quadrature_energy(p), analytic_energy(p))
    out.append(_entry("energy_closed_form", err < 1e-6, err, 1e-6))

    err = _rel(quadrature_admissibility(p), analytic_admissibility(p))
    out.append(_entry("admissibility_closed_form", err < 1e-6, err, 1e-6))

    err = _rel(quadrature_regularity(p, 2.0), regularity_integral(p, 2.0))
    out.append(_entry("regularity_closed_form", err < 1e-5, err, 1e-5, alpha=2.0))

    order = vanishing_moments_check(p, max_order)
    out.append(_entry("vanishing_moments", order == max_order, order, max_order))

    err = parseval_error(p)
    out.append(_entry("parseval", err < 1e-10, err, 1e-10))

    err = reciprocity_error(p)
    out.append(_entry("lambda_reciprocity", err < 1e-10, err, 1e-10))

    if p.omega_c <= math.pi:
        s = synth_spectrum(p, n_fft)
        lo, hi = bandwidth_crossings(s, p.kc_level)
        err = max(abs(lo - p.omega_c_lower), abs(hi - p.omega_c)) / s.domega
        out.append(_entry("bandwidth_calibration", err <= 2.0, err, 2.0, units="grid steps"))

    # an impulse input makes every row the dilated wavelet itself
    impulse = np.zeros(n_fft, dtype=complex)
    impulse[0] = 1.0
    m = [1.0, 1.0 / p.k, p.k, 0.5, 2.0]
    _, report = scale_law_fast_path(AnalyticSignal(impulse), p, SCALE_LAW_BASE, m)
    out.append(
        _entry(
            "scale_law",
            None,
            dict(zip([repr(x) for x in report.multipliers], report.relative_errors)),
            None,
            integral_form_error=report.integral_form_error,
            note="informational: no pass threshold",
        )
    )

    verdicts = table2_gate(p)
    out.append(
        _entry(
            "design_bounds",
            None,
            {v.bound: v.passed for v in verdicts},
            None,
            warnings=[v.message for v in verdicts if not v.passed],
            note="advisory only",
        )
    )
    return out


def suite_passed(entries: list[dict]) -> bool:
    return all(e["passed"] is not False for e in entries)
