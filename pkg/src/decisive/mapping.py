"""Indoor mapping metrics from administrator-measured map observations."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import CountOutOfRange, EmptySample, LengthMismatch, TooFewFiducials
from .field import ACUITY_LEVELS_MM
from .stats import mean_std

#: difficulty thresholds; configuration values fitted to the ten labeled
#: example fiducials, override per campaign if the course differs
HARD_TRAVERSAL_M = 20.0
HARD_TURNS = 5
EASY_TRAVERSAL_M = 10.0
EASY_TURNS = 2

SHAPE_CLASSES = ("complete", "incomplete", "shifted")
MAPPED_STATES = ("complete", "partial", "missing")


@dataclass(frozen=True)
class FiducialObservation:
    """One mapped half-cylinder as located on the evaluation map."""

    fiducial_id: str
    half: int  # 1 or 2
    map_xy: Optional[tuple[float, float]] = None  # map units (pixels or meters)
    mapped: str = "missing"  # complete | partial | missing

    def __post_init__(self):
        if self.half not in (1, 2):
            raise ValueError("half must be 1 or 2")
        if self.mapped not in MAPPED_STATES:
            raise ValueError(f"bad mapped state {self.mapped!r}")
        if self.mapped != "missing" and self.map_xy is None:
            raise ValueError("mapped fiducial halves need map coordinates")


@dataclass(frozen=True)
class FiducialGroundTruth:
    fiducial_id: str
    gt_xy: tuple[float, float]  # meters
    min_traversal: float  # meters
    min_turns: int

    def __post_init__(self):
        if self.min_traversal <= 0:
            raise ValueError("min_traversal must be positive")
        if self.min_turns < 0:
            raise ValueError("min_turns must be non-negative")


def dimensional_accuracy(reported: Sequence[float], ground_truth: Sequence[float]) -> float:
    """100 x (sum of reported dimensions) / (sum of ground-truth dimensions)."""
    if len(reported) != len(ground_truth):
        raise LengthMismatch(f"{len(reported)} reported vs {len(ground_truth)} truth values")
    if not ground_truth:
        raise EmptySample("no dimensions")
    if any(g <= 0 for g in ground_truth):
        raise ValueError("ground-truth dimensions must be positive")
    return 100.0 * sum(reported) / sum(ground_truth)


def fov_coverage(visible_50pct: int, total: int) -> float:
    """Percentage of boundaries at least half visible in the map."""
    if total <= 0:
        raise CountOutOfRange("total must be positive")
    if not 0 <= visible_50pct <= total:
        raise CountOutOfRange(f"visible count {visible_50pct} outside [0, {total}]")
    return 100.0 * visible_50pct / total


def shape_accuracy_rate(classes: Sequence[str]) -> float:
    """Percentage of fiducial pairs judged to form a complete circle."""
    if not classes:
        raise EmptySample("no fiducial classifications")
    for c in classes:
        if c not in SHAPE_CLASSES:
            raise ValueError(f"bad shape class {c!r}")
    return 100.0 * sum(1 for c in classes if c == "complete") / len(classes)


def global_error(
    obs: Sequence[FiducialObservation], truth: Sequence[FiducialGroundTruth]
) -> float:
    """Average pairwise map-to-truth distance error in centimeters.

    A single scale s (the map may be in pixels) is fitted in closed form to
    minimize sum((s * d_map - d_gt)^2) over all matched fiducial pairs; the
    reported error is the mean |s * d_map - d_gt| converted to cm. Only
    pairwise distances are compared, so rotation and translation of the map
    never enter.
    """
    gt_by_id = {g.fiducial_id: g.gt_xy for g in truth}
    located: dict[str, tuple[float, float]] = {}
    for o in obs:
        if o.map_xy is not None and o.fiducial_id in gt_by_id:
            located.setdefault(o.fiducial_id, o.map_xy)
    ids = sorted(located)
    if len(ids) < 3:
        raise TooFewFiducials(f"need >= 3 matched fiducials, have {len(ids)}")

    d_map, d_gt = [], []
    for i in range(len(ids)):
        for j in range(i + 1, len(ids)):
            a, b = located[ids[i]], located[ids[j]]
            g, h = gt_by_id[ids[i]], gt_by_id[ids[j]]
            d_map.append(math.hypot(a[0] - b[0], a[1] - b[1]))
            d_gt.append(math.hypot(g[0] - h[0], g[1] - h[1]))

    denom = sum(m * m for m in d_map)
    if denom == 0:
        raise TooFewFiducials("all matched fiducials coincide on the map")
    s = sum(m * g for m, g in zip(d_map, d_gt)) / denom
    mean_err_m = sum(abs(s * m - g) for m, g in zip(d_map, d_gt)) / len(d_map)
    return 100.0 * mean_err_m


def fiducial_coverage(
    obs: Sequence[FiducialObservation], truth: Sequence[FiducialGroundTruth]
) -> float:
    """Percentage of available fiducial halves mapped at least partially."""
    if not truth:
        raise EmptySample("no ground-truth fiducials")
    total_halves = 2 * len(truth)
    truth_ids = {g.fiducial_id for g in truth}
    mapped = {
        (o.fiducial_id, o.half)
        for o in obs
        if o.mapped in ("complete", "partial") and o.fiducial_id in truth_ids
    }
    return 100.0 * len(mapped) / total_halves


def difficulty_rating(min_traversal: float, min_turns: int) -> str:
    """L/M/H difficulty of reaching a fiducial's far side."""
    if min_traversal <= 0 or min_turns < 0:
        raise ValueError("inputs must be positive")
    if min_traversal >= HARD_TRAVERSAL_M or min_turns >= HARD_TURNS:
        return "H"
    if min_traversal <= EASY_TRAVERSAL_M and min_turns <= EASY_TURNS:
        return "L"
    return "M"


def acuity_summary(levels_mm: Sequence[float]) -> tuple[float, float]:
    """Mean and sample std of resolved acuity levels."""
    if not levels_mm:
        raise EmptySample("no acuity readings")
    for lvl in levels_mm:
        if not any(abs(lvl - known) < 1e-9 for known in ACUITY_LEVELS_MM):
            raise ValueError(f"{lvl} mm is not an acuity level")
    return mean_std(levels_mm)
