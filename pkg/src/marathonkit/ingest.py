"""Video manifests, frame sequences, runner-record CSVs, and fps subsampling.

Frame extraction from video containers is delegated to an external tool; this
module trusts a frame-image directory plus a manifest listing one file name
per line in frame order.
"""

from __future__ import annotations

import csv
import json
import statistics
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from .core import SOURCE_FPS, parse_clock_time
from .errors import (
    DuplicateBib,
    EmptyManifest,
    MalformedRow,
    MissingColumn,
    NonDivisorFps,
)

FULL_MARATHON = "FullMarathon"
HALF_MARATHON = "HalfMarathon"

FULL_MARATHON_KM = 42.0
HALF_MARATHON_KM = 21.1

# cumulativeTime_* column suffix -> distance in km
_SPLIT_COLUMNS = {
    "cumulativeTime_5k": 5.0,
    "cumulativeTime_10k": 10.0,
    "cumulativeTime_15k": 15.0,
    "cumulativeTime_20k": 20.0,
    "cumulativeTime_half": 21.1,
    "cumulativeTime_25k": 25.0,
    "cumulativeTime_30k": 30.0,
    "cumulativeTime_35k": 35.0,
    "cumulativeTime_40k": 40.0,
}

_REQUIRED_COLUMNS = ("bib", "name", "gender", "countryCode", "cumulativeTime_finish")


@dataclass(frozen=True)
class VideoMeta:
    file_name: str
    file_size_mb: float
    duration_s: float
    frame_rate: float
    width: int
    height: int
    track_create_date: str
    location_number: int
    gps: Optional[tuple] = None
    file_type: str = "MP4"

    def __post_init__(self):
        if self.duration_s <= 0:
            raise ValueError(f"duration_s must be > 0, got {self.duration_s}")
        if self.frame_rate <= 0:
            raise ValueError(f"frame_rate must be > 0, got {self.frame_rate}")
        if self.width <= 0 or self.height <= 0:
            raise ValueError(f"bad frame size {self.width}x{self.height}")

    @property
    def frame_count(self) -> int:
        return round(self.duration_s * self.frame_rate)

    @property
    def video_id(self) -> str:
        return Path(self.file_name).stem


@dataclass(frozen=True)
class RunnerRecord:
    bib: int
    name: str
    gender: str
    country_code: str
    race: str
    splits: dict  # distance_km -> cumulative seconds (gaps allowed)
    finish_time_s: int

    def __post_init__(self):
        pairs = sorted(self.splits.items())
        times = [t for _, t in pairs]
        if any(b <= a for a, b in zip(times, times[1:])):
            raise ValueError(f"bib {self.bib}: split times not strictly increasing")
        if any(t > self.finish_time_s for t in times):
            raise ValueError(f"bib {self.bib}: split exceeds finish time")

    @property
    def finish_distance_km(self) -> float:
        return FULL_MARATHON_KM if self.race == FULL_MARATHON else HALF_MARATHON_KM


@dataclass(frozen=True)
class FrameSequence:
    video_id: str
    directory: str
    frame_files: tuple
    source_fps: int = SOURCE_FPS

    def __post_init__(self):
        object.__setattr__(self, "frame_files", tuple(self.frame_files))

    @property
    def frame_count(self) -> int:
        return len(self.frame_files)


def load_video_manifest(path) -> list:
    """Read the JSON manifest of per-video metadata (exifTool field names)."""
    with open(path) as fh:
        entries = json.load(fh)
    videos = []
    for e in entries:
        width, height = (int(v) for v in e["ImageSize"].lower().split("x"))
        gps = None
        if e.get("GPSCoordinates"):
            lat, lon = (float(v) for v in e["GPSCoordinates"].split())
            gps = (lat, lon)
        videos.append(
            VideoMeta(
                file_name=e["FileName"],
                file_size_mb=float(e["FileSize"]),
                duration_s=float(e["Duration"]),
                frame_rate=float(e["VideoFrameRate"]),
                width=width,
                height=height,
                track_create_date=e.get("TrackCreateDate", ""),
                location_number=int(e["LocationNumber"]),
                gps=gps,
                file_type=e.get("FileType", "MP4"),
            )
        )
    return videos


def load_frame_sequence(video_id: str, directory) -> FrameSequence:
    """Build a FrameSequence from a manifest file or by listing the directory.

    If `<directory>/frames.txt` exists it is taken as the authoritative
    ordering (one file name per line); otherwise image files are sorted by
    name, relying on zero-padded numbering.
    """
    directory = Path(directory)
    manifest = directory / "frames.txt"
    if manifest.exists():
        names = [ln.strip() for ln in manifest.read_text().splitlines() if ln.strip()]
    else:
        names = sorted(
            p.name
            for p in directory.iterdir()
            if p.suffix.lower() in (".png", ".jpg", ".jpeg")
        )
    return FrameSequence(video_id=video_id, directory=str(directory), frame_files=names)


def load_runner_csv(path, race: Optional[str] = None) -> list:
    """Parse runner records from a comma-separated export.

    The race is inferred from the header when not given: the half-marathon
    export lacks the 25k+ split columns. Rows with an unparseable bib are
    rejected with their row number; duplicate bibs are an error.
    """
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        for col in _REQUIRED_COLUMNS:
            if col not in header:
                raise MissingColumn(f"runner CSV missing column {col!r}")
        if race is None:
            race = FULL_MARATHON if "cumulativeTime_25k" in header else HALF_MARATHON

        records = []
        seen = set()
        for row_no, row in enumerate(reader, start=2):
            try:
                bib = int(row["bib"])
                if bib <= 0:
                    raise ValueError("bib must be positive")
            except (TypeError, ValueError) as exc:
                raise MalformedRow(row_no, f"bad bib {row.get('bib')!r}: {exc}") from exc
            if bib in seen:
                raise DuplicateBib(f"bib {bib} appears twice (row {row_no})")
            seen.add(bib)

            try:
                finish_s = parse_clock_time(row["cumulativeTime_finish"])
                splits = {}
                for col, dist in _SPLIT_COLUMNS.items():
                    value = (row.get(col) or "").strip()
                    if value:
                        splits[dist] = parse_clock_time(value)
                records.append(
                    RunnerRecord(
                        bib=bib,
                        name=row["name"].strip(),
                        gender=row["gender"].strip(),
                        country_code=row["countryCode"].strip(),
                        race=race,
                        splits=splits,
                        finish_time_s=finish_s,
                    )
                )
            except Exception as exc:
                raise MalformedRow(row_no, str(exc)) from exc
    return records


def save_runner_csv(records, path):
    """Inverse of load_runner_csv for well-formed records."""
    from .core import format_clock_time

    full = any(r.race == FULL_MARATHON for r in records)
    split_cols = list(_SPLIT_COLUMNS) if full else [
        c for c in _SPLIT_COLUMNS if _SPLIT_COLUMNS[c] <= HALF_MARATHON_KM
    ]
    fieldnames = ["bib", "name", "gender", "countryCode", *split_cols, "cumulativeTime_finish"]
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=fieldnames)
        writer.writeheader()
        for r in sorted(records, key=lambda r: r.bib):
            row = {
                "bib": r.bib,
                "name": r.name,
                "gender": r.gender,
                "countryCode": r.country_code,
                "cumulativeTime_finish": format_clock_time(r.finish_time_s),
            }
            for col in split_cols:
                dist = _SPLIT_COLUMNS[col]
                row[col] = format_clock_time(r.splits[dist]) if dist in r.splits else ""
            writer.writerow(row)


_VALID_TARGET_FPS = (1, 2, 3, 5, 6, 10, 15, 30)


def subsample_frames(seq_or_count, target_fps: int) -> list:
    """Frame indices kept when extracting every (30/target_fps)-th frame."""
    if SOURCE_FPS % target_fps != 0 or target_fps not in _VALID_TARGET_FPS:
        raise NonDivisorFps(f"target fps {target_fps} does not divide {SOURCE_FPS}")
    frame_count = (
        seq_or_count if isinstance(seq_or_count, int) else seq_or_count.frame_count
    )
    stride = SOURCE_FPS // target_fps
    return list(range(0, frame_count, stride))


def dataset_stats(manifests) -> dict:
    """Aggregate duration/frame statistics (population standard deviation)."""
    if not manifests:
        raise EmptyManifest("no videos in manifest")
    durations = [m.duration_s for m in manifests]
    return {
        "count": len(manifests),
        "total_duration_h": sum(durations) / 3600.0,
        "mean_duration_s": statistics.fmean(durations),
        "std_duration_s": statistics.pstdev(durations),
        "total_frames": sum(m.frame_count for m in manifests),
    }
