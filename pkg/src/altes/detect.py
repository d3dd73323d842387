"""Ridge extraction from scalograms and scoring against ground truth."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from altes.synth import GroundTruth
from altes.transform import Scalogram


@dataclass(frozen=True)
class Ridge:
    scale_index: np.ndarray
    shift_index: np.ndarray
    magnitude: np.ndarray
    slope: float
    intercept: float
    r_squared: float

    @property
    def points(self) -> list[tuple[int, int, float]]:
        return [(int(i), int(j), float(m)) for i, j, m in zip(self.scale_index, self.shift_index, self.magnitude)]

    @property
    def strength(self) -> float:
        return float(np.sum(self.magnitude))

    @property
    def center(self) -> float:
        """Magnitude-weighted mean shift."""
        return float(np.sum(self.magnitude * self.shift_index) / np.sum(self.magnitude))


@dataclass(frozen=True)
class Detection:
    center: int
    ridge: Ridge
    score: float


@dataclass(frozen=True)
class DetectionReport:
    detections: list
    matches: list  # (detection index, truth index, center error)
    hits: int
    misses: int
    false_alarms: int
    mean_abs_error: float

    def to_dict(self) -> dict:
        return {
            "hits": self.hits,
            "misses": self.misses,
            "false_alarms": self.false_alarms,
            "mean_abs_center_error": None if math.isnan(self.mean_abs_error) else self.mean_abs_error,
            "detections": [
                {
                    "center": d.center,
                    "score": d.score,
                    "ridge_length": len(d.ridge.scale_index),
                    "slope": d.ridge.slope,
                    "intercept": d.ridge.intercept,
                    "r_squared": d.ridge.r_squared,
                }
                for d in self.detections
            ],
            "matches": [{"detection": i, "truth": j, "center_error": e} for i, j, e in self.matches],
        }


def _line_fit(x: np.ndarray, y: np.ndarray) -> tuple[float, float, float]:
    x = x.astype(float)
    y = y.astype(float)
    if len(x) < 2 or np.ptp(x) == 0:
        return 0.0, float(y.mean()), 1.0
    slope, intercept = np.polyfit(x, y, 1)
    ss_tot = np.sum((y - y.mean()) ** 2)
    if ss_tot == 0:
        return float(slope), float(intercept), 1.0
    r2 = 1.0 - np.sum((y - (slope * x + intercept)) ** 2) / ss_tot
    return float(slope), float(intercept), float(min(max(r2, 0.0), 1.0))


def _row_maxima(row: np.ndarray, floor: float) -> np.ndarray:
    inner = (row[1:-1] >= row[:-2]) & (row[1:-1] > row[2:]) & (row[1:-1] >= floor)
    return np.nonzero(inner)[0] + 1


def extract_ridges(
    sc: Scalogram,
    max_ridges: int = 3,
    min_len: int | None = None,
    window: int = 2,
    rel_floor: float = 0.05,
) -> list[Ridge]:
    """Greedy ridge following across scales.

    Local maxima below ``rel_floor`` times the global maximum are ignored.
    Chains are extended row by row, strongest chain first, to the nearest
    unclaimed maximum within ``window`` shift bins.  ``min_len`` defaults to a
    third of the scale axis.
    """
    mag = sc.magnitude
    n_scales = mag.shape[0]
    if n_scales == 0 or mag.size == 0:
        return []
    peak = mag.max()
    if peak <= 0.0:
        return []
    if min_len is None:
        min_len = max(2, math.ceil(n_scales / 3))
    floor = rel_floor * peak

    chains: list[list[tuple[int, int]]] = []
    active: list[int] = []
    for i in range(n_scales):
        maxima = _row_maxima(mag[i], floor)
        claimed: set[int] = set()
        still_active = []
        for c in sorted(active, key=lambda c: (-mag[chains[c][-1]], c)):
            j0 = chains[c][-1][1]
            lo = np.searchsorted(maxima, j0 - window)
            hi = np.searchsorted(maxima, j0 + window, side="right")
            cands = [int(j) for j in maxima[lo:hi] if int(j) not in claimed]
            if not cands:
                continue
            j = min(cands, key=lambda j: (abs(j - j0), -mag[i, j], j))
            claimed.add(j)
            chains[c].append((i, j))
            still_active.append(c)
        for j in maxima:
            if int(j) not in claimed:
                chains.append([(i, int(j))])
                still_active.append(len(chains) - 1)
        active = still_active

    ridges = []
    for chain in chains:
        if len(chain) < min_len:
            continue
        si = np.array([p[0] for p in chain])
        sh = np.array([p[1] for p in chain])
        m = mag[si, sh]
        slope, intercept, r2 = _line_fit(si, sh)
        ridges.append(Ridge(si, sh, m, slope, intercept, r2))
    ridges.sort(key=lambda r: (-r.strength, int(r.shift_index[0]), int(r.scale_index[0])))
    return ridges[:max_ridges]


def score_detections(ridges: Sequence[Ridge], truth: GroundTruth, tol: int = 16) -> DetectionReport:
    """One-to-one matching of ridge centres to true centres, closest pairs first."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    detections = sorted(
        (Detection(center=int(round(r.center)), ridge=r, score=r.strength) for r in ridges),
        key=lambda d: (d.center, -d.score),
    )
    truths = list(truth.chirp_centers)
    pairs = sorted(
        (abs(d.center - t), di, ti)
        for di, d in enumerate(detections)
        for ti, t in enumerate(truths)
        if abs(d.center - t) <= tol
    )
    used_d, used_t, matches = set(), set(), []
    for err, di, ti in pairs:
        if di in used_d or ti in used_t:
            continue
        used_d.add(di)
        used_t.add(ti)
        matches.append((di, ti, int(err)))
    matches.sort(key=lambda m: m[1])
    hits = len(matches)
    mean_err = float(np.mean([m[2] for m in matches])) if matches else float("nan")
    return DetectionReport(
        detections=detections,
        matches=matches,
        hits=hits,
        misses=len(truths) - hits,
        false_alarms=len(detections) - hits,
        mean_abs_error=mean_err,
    )


def mean_r_squared(ridges: Sequence[Ridge]) -> float:
    return float(np.mean([r.r_squared for r in ridges])) if ridges else 0.0
