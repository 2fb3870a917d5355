"""Scenario scoring of recording locations and KS-based subset selection.

A location's difficulty score is the sum of five category scores (lighting,
resolution, recording angle, occlusion, crowded videos), each in [1, 5]. A
representative subset of score values is chosen by minimizing the two-sample
Kolmogorov-Smirnov distance to the full score distribution, either by seeded
random search or exhaustively over all k-combinations of the distinct values.
"""

from __future__ import annotations

import csv
import math
import random
from dataclasses import dataclass
from itertools import combinations

from .errors import ComponentOutOfRange, EmptySample, InsufficientDistinctScores


@dataclass(frozen=True)
class LocationScore:
    location_number: int
    lighting: int
    resolution: int
    recording_angle: int
    occlusion: int
    crowded_videos: int

    def __post_init__(self):
        for name in ("lighting", "resolution", "recording_angle", "occlusion", "crowded_videos"):
            value = getattr(self, name)
            if not 1 <= value <= 5:
                raise ComponentOutOfRange(f"{name}={value} outside [1,5]")

    @property
    def total(self) -> int:
        return (
            self.lighting
            + self.resolution
            + self.recording_angle
            + self.occlusion
            + self.crowded_videos
        )


@dataclass(frozen=True)
class KsResult:
    statistic: float
    critical_value: float

    @property
    def accepted(self) -> bool:
        return self.statistic < self.critical_value


def location_score(
    location_number, lighting, resolution, recording_angle, occlusion, crowded_videos
) -> LocationScore:
    return LocationScore(
        location_number=location_number,
        lighting=lighting,
        resolution=resolution,
        recording_angle=recording_angle,
        occlusion=occlusion,
        crowded_videos=crowded_videos,
    )


def _ecdf(sorted_sample, x) -> float:
    """Right-continuous empirical CDF: fraction of sample values <= x."""
    import bisect

    return bisect.bisect_right(sorted_sample, x) / len(sorted_sample)


def ks_statistic(sample_a, sample_b) -> float:
    """Two-sample KS distance: sup over x of |F_a(x) - F_b(x)|.

    The supremum is attained at a sample value, so it suffices to evaluate
    both empirical CDFs at every value appearing in either sample.
    """
    a = sorted(sample_a)
    b = sorted(sample_b)
    if not a or not b:
        raise EmptySample("both samples must be non-empty")
    breakpoints = sorted(set(a) | set(b))
    return max(abs(_ecdf(a, x) - _ecdf(b, x)) for x in breakpoints)


def ks_critical_value(n1: int, n2: int, c_alpha: float) -> float:
    """Approximate critical distance c(alpha) * sqrt((n1+n2)/(n1*n2))."""
    return c_alpha * math.sqrt((n1 + n2) / (n1 * n2))


def select_sample_scores(
    all_scores,
    k: int,
    c_alpha: float,
    iterations: int = 10000,
    seed: int = 0,
    exhaustive: bool = False,
):
    """Pick k distinct score values whose distribution best matches all_scores.

    Random mode draws `iterations` seeded k-subsets of the distinct score
    values; exhaustive mode scans every k-combination. Ties on the KS distance
    are broken by the lexicographically smallest subset, so the result is
    deterministic and order-stable under parallel evaluation.

    Returns {"subset": sorted list of k scores, "ks": KsResult}.
    """
    all_scores = list(all_scores)
    if not all_scores:
        raise EmptySample("all_scores is empty")
    distinct = sorted(set(all_scores))
    if k > len(distinct):
        raise InsufficientDistinctScores(
            f"need {k} distinct scores, only {len(distinct)} available"
        )

    if exhaustive:
        candidates = combinations(distinct, k)
    else:
        rng = random.Random(seed)
        candidates = (tuple(sorted(rng.sample(distinct, k))) for _ in range(iterations))

    best_subset = None
    best_d = None
    for subset in candidates:
        d = ks_statistic(subset, all_scores)
        if best_d is None or d < best_d or (d == best_d and subset < best_subset):
            best_subset, best_d = subset, d

    critical = ks_critical_value(len(all_scores), k, c_alpha)
    return {
        "subset": list(best_subset),
        "ks": KsResult(statistic=best_d, critical_value=critical),
    }


def locations_for_scores(scores, chosen_totals) -> list:
    """Map chosen score values back to concrete locations.

    Per chosen total, the location with the lowest location_number holding
    that score is picked.
    """
    picked = []
    for total in chosen_totals:
        matches = sorted(
            (s.location_number for s in scores if s.total == total)
        )
        if not matches:
            raise InsufficientDistinctScores(f"no location has score {total}")
        picked.append(matches[0])
    return picked


def load_scores_csv(path) -> list:
    """Read the per-location scenario scores table.

    Columns: location,occlusion,lighting,recording_angle,resolution,
    crowded_videos,score. The score column is checked against the component
    sum.
    """
    scores = []
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            s = LocationScore(
                location_number=int(row["location"]),
                occlusion=int(row["occlusion"]),
                lighting=int(row["lighting"]),
                recording_angle=int(row["recording_angle"]),
                resolution=int(row["resolution"]),
                crowded_videos=int(row["crowded_videos"]),
            )
            if "score" in row and row["score"].strip() and int(row["score"]) != s.total:
                raise ValueError(
                    f"location {s.location_number}: score column {row['score']} "
                    f"!= component sum {s.total}"
                )
            scores.append(s)
    return scores


def save_scores_csv(scores, path):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["location", "occlusion", "lighting", "recording_angle", "resolution",
             "crowded_videos", "score"]
        )
        for s in scores:
            writer.writerow(
                [s.location_number, s.occlusion, s.lighting, s.recording_angle,
                 s.resolution, s.crowded_videos, s.total]
            )
