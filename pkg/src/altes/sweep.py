"""Parameter-grid studies of chirplet localization, plus discrete-time design rules."""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from altes.chirplet import DEFAULT_KC, ChirpletParams
from altes.errors import InvalidParameterError
from altes.properties import MAX_NFFT, advise_fft_size, count_oscillations, fit_fft_size, next_pow2
from altes.transform import resolve_workers

log = logging.getLogger(__name__)

MAX_GRID_POINTS = 100_000


@dataclass(frozen=True)
class SweepRecord:
    params: ChirpletParams
    bandwidth: float
    delay_spread: float
    oscillations: float
    n_fft_used: int
    flagged: bool = False

    @property
    def advised_n_fft(self) -> int:
        return next_pow2(self.delay_spread)


@dataclass(frozen=True)
class FrontierResult:
    records: list
    frontier: list  # indices into records

    @property
    def frontier_records(self) -> list:
        return [self.records[i] for i in self.frontier]


@dataclass(frozen=True)
class SweepGrid:
    """Grid over omega0 (log-spaced), omega_c / omega0 (log-spaced up to pi) and lam.

    For every omega0 the cutoff ratios are (pi/omega0)**(j/n_ratio),
    j = 1..n_ratio, so omega_c = pi is always on the grid.  Chirp rates are
    midpoints of n_lambda equal cells of (lambda_min, lambda_max), which keeps
    both ends open.  The default omega0 axis is quarter-octave spaced from
    pi*2**-6 to pi*2**-0.25 and contains pi/2.
    """

    omega0_min: float = math.pi * 2.0 ** -6
    omega0_max: float = math.pi * 2.0 ** -0.25
    n_omega0: int = 24
    n_ratio: int = 16
    lambda_min: float = 0.0
    lambda_max: float = 1.0
    n_lambda: int = 10
    kc_level: float = DEFAULT_KC

    def __post_init__(self):
        if min(self.n_omega0, self.n_ratio, self.n_lambda) < 1:
            raise InvalidParameterError("grid is empty")
        if not 0.0 < self.omega0_min <= self.omega0_max < math.pi:
            raise InvalidParameterError("need 0 < omega0_min <= omega0_max < pi")
        if not 0.0 <= self.lambda_min < self.lambda_max <= 1.0:
            raise InvalidParameterError("need 0 <= lambda_min < lambda_max <= 1")
        if self.size > MAX_GRID_POINTS:
            raise InvalidParameterError(
                f"grid has {self.size} points (limit {MAX_GRID_POINTS}); reduce n_omega0, n_ratio or n_lambda"
            )

    @property
    def size(self) -> int:
        return self.n_omega0 * self.n_ratio * self.n_lambda

    def omega0_values(self) -> np.ndarray:
        if self.n_omega0 == 1:
            return np.array([self.omega0_min])
        return np.geomspace(self.omega0_min, self.omega0_max, self.n_omega0)

    def lambda_values(self) -> np.ndarray:
        width = (self.lambda_max - self.lambda_min) / self.n_lambda
        return self.lambda_min + (np.arange(self.n_lambda) + 0.5) * width

    def points(self) -> list[ChirpletParams]:
        out = []
        for w0 in self.omega0_values():
            top = math.pi / w0
            for j in range(1, self.n_ratio + 1):
                wc = math.pi if j == self.n_ratio else w0 * top ** (j / self.n_ratio)
                for lam in self.lambda_values():
                    out.append(ChirpletParams(float(w0), float(wc), float(lam), self.kc_level))
        return out


def measure_record(p: ChirpletParams, max_nfft: int = MAX_NFFT) -> SweepRecord:
    n, sig, loc = fit_fft_size(p, max_nfft=max_nfft)
    return SweepRecord(
        params=p,
        bandwidth=p.bandwidth,
        delay_spread=loc.delay_spread,
        oscillations=count_oscillations(sig, loc),
        n_fft_used=n,
        flagged=loc.truncated,
    )


def run_sweep(
    grid: SweepGrid | Iterable[ChirpletParams],
    workers: int | None = None,
    max_nfft: int = MAX_NFFT,
) -> list[SweepRecord]:
    """Measure bandwidth, delay spread and oscillation count at every grid point.

    Output order follows the grid regardless of how work is scheduled.
    """
    points = grid.points() if isinstance(grid, SweepGrid) else list(grid)
    if not points:
        raise InvalidParameterError("grid is empty")
    n_workers = resolve_workers(workers)
    if n_workers > 1:
        with ThreadPoolExecutor(max_workers=n_workers) as pool:
            records = list(pool.map(lambda p: measure_record(p, max_nfft), points))
    else:
        records = [measure_record(p, max_nfft) for p in points]
    flagged = sum(r.flagged for r in records)
    if flagged:
        log.warning("%d records exceed the %d-point transform limit", flagged, max_nfft)
    return records


def pareto_frontier(records: Sequence[SweepRecord]) -> FrontierResult:
    """Pareto-minimal records in (delay_spread, bandwidth); exact ties are all kept."""
    if not records:
        raise InvalidParameterError("no records")
    order = sorted(range(len(records)), key=lambda i: (records[i].delay_spread, records[i].bandwidth))
    frontier = []
    best_b = math.inf
    i = 0
    while i < len(order):
        # group records sharing the same delay spread
        j = i
        tau = records[order[i]].delay_spread
        while j < len(order) and records[order[j]].delay_spread == tau:
            j += 1
        group = order[i:j]
        b_min = min(records[k].bandwidth for k in group)
        if b_min < best_b:
            frontier.extend(k for k in group if records[k].bandwidth == b_min)
            best_b = b_min
        i = j
    return FrontierResult(records=list(records), frontier=sorted(frontier))


@dataclass(frozen=True)
class GateVerdict:
    bound: str
    passed: bool
    message: str


def table2_gate(p: ChirpletParams, tol: float = 1e-9) -> list[GateVerdict]:
    """Check the discrete-time design bounds; advisory only."""
    lam = p.lam
    in_band = 0.25 < lam < 0.75 or 4.0 / 3.0 < lam < 4.0
    return [
        GateVerdict(
            "wideband_chirping",
            p.omega0 < math.pi / 4,
            f"omega0 = {p.omega0:.6g} (want < pi/4)",
        ),
        GateVerdict(
            "critical_sampling",
            abs(p.omega_c - math.pi) <= tol * math.pi,
            f"omega_c = {p.omega_c:.6g} (want pi)",
        ),
        GateVerdict(
            "bounded_oscillations",
            in_band,
            f"lam = {lam:.6g} (want 1/4 < lam < 3/4 or 4/3 < lam < 4)",
        ),
    ]


def fft_size_advisor(p: ChirpletParams, max_nfft: int = MAX_NFFT) -> int:
    """Smallest power-of-two transform that holds the -kc delay spread."""
    return advise_fft_size(p, max_nfft)
