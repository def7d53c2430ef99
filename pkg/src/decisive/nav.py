"""Path-deviation geometry and summary metrics for traversal and aperture tests."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import Trajectory
from .errors import DataQualityWarning, EmptySpan, InconsistentFlags, ZeroDuration
from .stats import mean_std


@dataclass(frozen=True)
class ReferencePath:
    """Polyline the sUAS was asked to fly; closed paths include the closing edge."""

    vertices: tuple[tuple[float, float, float], ...]
    closed: bool = False

    def __post_init__(self):
        verts = tuple(tuple(float(c) for c in v) for v in self.vertices)
        if len(verts) < 2:
            raise ValueError("path needs at least two vertices")
        for a, b in zip(verts, verts[1:]):
            if a == b:
                raise ValueError("consecutive vertices must differ")
        object.__setattr__(self, "vertices", verts)

    def segments(self) -> list[tuple[np.ndarray, np.ndarray]]:
        verts = [np.asarray(v) for v in self.vertices]
        segs = list(zip(verts, verts[1:]))
        if self.closed and tuple(self.vertices[0]) != tuple(self.vertices[-1]):
            segs.append((verts[-1], verts[0]))
        return segs


@dataclass(frozen=True)
class DeviationSummary:
    per_flight_ad: tuple[float, ...]
    mean_ad: float
    std_ad: float


def _segment_distance(p: np.ndarray, a: np.ndarray, b: np.ndarray) -> float:
    ab = b - a
    denom = float(ab @ ab)
    s = float((p - a) @ ab) / denom
    s = min(max(s, 0.0), 1.0)
    return float(np.linalg.norm(p - (a + s * ab)))


def point_path_deviation(p: Sequence[float], path: ReferencePath) -> float:
    """Minimum distance from a point to the path's clamped segments."""
    point = np.asarray(p, dtype=float)
    return min(_segment_distance(point, a, b) for a, b in path.segments())


def average_deviation(traj: Trajectory, path: ReferencePath) -> float:
    """Mean per-sample deviation from the path, equal weight per recorded sample."""
    if len(traj) < 1:
        raise EmptySpan("no samples")
    return float(np.mean([point_path_deviation(p, path) for p in traj.pos]))


def deviation_summary(flights: Sequence[tuple[Trajectory, ReferencePath]]) -> DeviationSummary:
    """Per-flight average deviation plus the mean and sample std across flights."""
    if not flights:
        raise EmptySpan("no flights")
    ads = [average_deviation(traj, path) for traj, path in flights]
    if len(ads) == 1:
        warnings.warn("single flight: std reported as 0", DataQualityWarning)
    mean, std = mean_std(ads)
    return DeviationSummary(tuple(ads), mean, std)


def waypoint_error(final_pos: Sequence[float], waypoint: Sequence[float]) -> float:
    """Horizontal-plane distance between the landing point and the waypoint.

    Altitude is ignored: the vehicle has landed, so any z difference is
    tracker noise.
    """
    fx, fy = float(final_pos[0]), float(final_pos[1])
    wx, wy = float(waypoint[0]), float(waypoint[1])
    return math.hypot(fx - wx, fy - wy)


def waypoint_summary(errors: Sequence[float]) -> tuple[float, float]:
    """(accuracy, precision) = (mean, sample std) of landing errors."""
    if not errors:
        raise EmptySpan("no trials")
    return mean_std(errors)


def traversal_speed(length_m: float, duration_min: float) -> float:
    """Average speed in m/s from total length traversed and duration in minutes."""
    if duration_min <= 0:
        raise ZeroDuration("duration must be positive")
    return length_m / (duration_min * 60.0)


def classify_aperture_trial(passed: bool, contact: bool, ripped: bool) -> str:
    """Tier an aperture pass-through: A1 clean, A2 contact, A3 tear, B1 failed."""
    if ripped and not contact:
        raise InconsistentFlags("ripped implies contact")
    if not passed:
        return "B1"
    if not contact:
        return "A1"
    return "A3" if ripped else "A2"
