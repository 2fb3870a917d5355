"""Runner timelines, dashboard queries, LiRj assignment, and re-id ranking.

Passing times at the 42 course locations are estimated with per-segment
average speeds between consecutive available splits; at a checkpoint whose
distance coincides with a recorded split the estimate equals the split
exactly.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import Identity, UniqueId
from .errors import (
    DimensionMismatch,
    EmptyGallery,
    InsufficientSplits,
    NonMonotoneSplit,
    UndecodableImage,
    UnknownLocation,
)
from .ingest import RunnerRecord

DEFAULT_DELTA_T_S = 60
DEFAULT_REID_TOP_K = 20
BASELINE_FEATURE_DIM = 192  # 8 x 8 x RGB


@dataclass(frozen=True)
class TimelineEntry:
    location_number: int
    distance_km: float
    estimated_passing_s: float


@dataclass(frozen=True)
class Timeline:
    bib: int
    entries: tuple

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(self.entries))
        times = [e.estimated_passing_s for e in self.entries]
        if any(b <= a for a, b in zip(times, times[1:])):
            raise ValueError(f"bib {self.bib}: passing times not strictly increasing")

    def at_location(self, location_number: int) -> Optional[TimelineEntry]:
        for e in self.entries:
            if e.location_number == location_number:
                return e
        return None


def segment_speed(d_i_km, t_i_s, d_j_km, t_j_s) -> float:
    """Average speed (km/s) over the segment between two split points."""
    if d_j_km <= d_i_km or d_i_km < 0:
        raise NonMonotoneSplit(f"distances {d_i_km} -> {d_j_km} not increasing")
    if t_j_s <= t_i_s or t_i_s < 0:
        raise NonMonotoneSplit(f"times {t_i_s} -> {t_j_s} not increasing")
    return (d_j_km - d_i_km) / (t_j_s - t_i_s)


def compute_timeline(record: RunnerRecord, checkpoints) -> Timeline:
    """Estimate when a runner passes each checkpoint.

    `checkpoints` is a list of (location_number, distance_km). Splits with
    gaps are fine: a segment spans the two nearest recorded splits, so a
    missing intermediate value is bridged by the surrounding pair. The race
    start contributes an implicit (0 km, 0 s) point; the finish split caps
    the track.
    """
    points = sorted(
        list(record.splits.items())
        + [(record.finish_distance_km, float(record.finish_time_s))]
    )
    if points[0][0] > 0:
        points.insert(0, (0.0, 0.0))
    # drop duplicate distances (e.g. a half split recorded at the finish line)
    deduped = [points[0]]
    for d, t in points[1:]:
        if d > deduped[-1][0]:
            deduped.append((d, t))
    points = deduped
    if len(points) < 2:
        raise InsufficientSplits(f"bib {record.bib}: need at least 2 split points")

    entries = []
    for location_number, d_x in sorted(checkpoints, key=lambda c: c[1]):
        if d_x < 0:
            raise UnknownLocation(f"checkpoint {location_number} at negative {d_x} km")
        if d_x > points[-1][0]:
            # beyond this runner's finish (e.g. half-marathoner): unreachable
            continue
        # segment i -> j with d_i <= d_x <= d_j
        for (d_i, t_i), (d_j, t_j) in zip(points, points[1:]):
            if d_i <= d_x <= d_j:
                if d_x == d_i:
                    t_x = t_i
                elif d_x == d_j:
                    t_x = t_j
                else:
                    t_x = t_i + (d_x - d_i) / segment_speed(d_i, t_i, d_j, t_j)
                entries.append(TimelineEntry(location_number, d_x, t_x))
                break
    return Timeline(bib=record.bib, entries=tuple(entries))


def time_window_query(timelines, location_number: int, t_s: float, delta_s: float) -> list:
    """Bibs passing a location within [t - delta, t + delta], inclusive.

    Sorted ascending by passing time, ties by bib.
    """
    if not 1 <= location_number <= 42:
        raise UnknownLocation(f"location {location_number} outside 1..42")
    if delta_s < 0:
        raise ValueError("delta_s must be >= 0")
    hits = []
    for tl in timelines:
        entry = tl.at_location(location_number)
        if entry is not None and t_s - delta_s <= entry.estimated_passing_s <= t_s + delta_s:
            hits.append((entry.estimated_passing_s, tl.bib))
    return [bib for _, bib in sorted(hits)]


def partial_search(records, fragment: str) -> list:
    """Runners whose name contains the fragment (case-insensitive) or whose
    bib, rendered in decimal, contains it as a digit substring. Sorted by bib.
    """
    if not fragment:
        raise ValueError("fragment must be non-empty")
    frag = fragment.lower()
    hits = [
        r
        for r in records
        if frag in r.name.lower() or (frag.isdigit() and frag in str(r.bib))
    ]
    return sorted(hits, key=lambda r: r.bib)


class UniqueIdCounter:
    """Per-location monotone counters for LiRj assignment.

    Never reissues a (location, runner_number) pair. Mutations must be
    externally serialized (single-writer contract).
    """

    def __init__(self, state: Optional[dict] = None):
        self._next = {int(k): int(v) for k, v in (state or {}).items()}

    def state(self) -> dict:
        return dict(self._next)

    def assign(self, location_number: int) -> UniqueId:
        if not 1 <= location_number <= 42:
            raise UnknownLocation(f"location {location_number} outside 1..42")
        j = self._next.get(location_number, 1)
        self._next[location_number] = j + 1
        return UniqueId(location_number=location_number, runner_number=j)


def assign_unique_id(counter: UniqueIdCounter, location_number: int) -> UniqueId:
    return counter.assign(location_number)


@dataclass(frozen=True)
class GalleryImage:
    image_id: str
    feature: tuple
    runner_label: Optional[Identity] = None

    def __post_init__(self):
        object.__setattr__(self, "feature", tuple(float(v) for v in self.feature))


def reid_rank(gallery, probe_feature, k: int = DEFAULT_REID_TOP_K) -> list:
    """Gallery images nearest to the probe by Euclidean distance.

    At most k results, ascending distance, ties broken by gallery insertion
    order.
    """
    gallery = list(gallery)
    if not gallery:
        raise EmptyGallery("gallery is empty")
    probe = np.asarray(probe_feature, dtype=float)
    dims = {len(g.feature) for g in gallery}
    if len(dims) != 1 or probe.shape != (dims.pop(),):
        raise DimensionMismatch(
            f"probe dim {probe.shape} vs gallery dims {sorted(len(g.feature) for g in gallery)[:3]}"
        )
    features = np.array([g.feature for g in gallery], dtype=float)
    distances = np.linalg.norm(features - probe, axis=1)
    order = np.argsort(distances, kind="stable")[: max(k, 0)]
    return [(gallery[i].image_id, float(distances[i])) for i in order]


def baseline_embed(image) -> np.ndarray:
    """Trivial stand-in embedder: 8x8 RGB thumbnail, flattened to [0,1]^192.

    Accepts a file path, raw encoded bytes, a PIL image, or an HxWx3 uint8
    array. Deterministic: the same pixels always produce the same vector.
    """
    from PIL import Image, UnidentifiedImageError

    try:
        if isinstance(image, Image.Image):
            img = image
        elif isinstance(image, (bytes, bytearray)):
            img = Image.open(io.BytesIO(image))
        elif isinstance(image, np.ndarray):
            img = Image.fromarray(image)
        else:
            img = Image.open(image)
        img = img.convert("RGB").resize((8, 8), Image.BILINEAR)
    except (UnidentifiedImageError, OSError, ValueError, TypeError) as exc:
        raise UndecodableImage(str(exc)) from exc
    return np.asarray(img, dtype=float).reshape(-1) / 255.0


# --- file formats ------------------------------------------------------------

def load_checkpoints_csv(path) -> list:
    """Checkpoint table: location_number,distance_km."""
    with open(path, newline="") as fh:
        return [
            (int(row["location_number"]), float(row["distance_km"]))
            for row in csv.DictReader(fh)
        ]


def load_gallery_json(path) -> list:
    import json

    from .core import parse_identity

    with open(path) as fh:
        entries = json.load(fh)
    return [
        GalleryImage(
            image_id=e["image_id"],
            feature=e["feature"],
            runner_label=parse_identity(e["label"]) if e.get("label") else None,
        )
        for e in entries
    ]


def save_timelines_csv(timelines, path):
    """Timeline export: bib,location_number,estimated_passing_s."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["bib", "location_number", "estimated_passing_s"])
        for tl in timelines:
            for e in tl.entries:
                writer.writerow([tl.bib, e.location_number, e.estimated_passing_s])
