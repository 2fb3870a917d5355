"""Domain types, validation, and the annotation file schemas.

Coordinates are real-valued internally; interpolation produces fractional
pixels. `round_half_up` is applied only when exporting to integer-pixel
consumers. Boxes are not clamped to frame dimensions here: frame size may be
unknown at construction and out-of-frame checks belong to ingestion.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from typing import Union

from .errors import (
    DegenerateBox,
    MalformedIdentity,
    MalformedTime,
    NegativeCoordinate,
)

SOURCE_FPS = 30


def round_half_up(value: float) -> int:
    """Round to nearest integer, halves away from zero (export rule)."""
    import math

    return int(math.floor(value + 0.5))


@dataclass(frozen=True)
class BoundingBox:
    """Axis-aligned pixel box; zero-area boxes are rejected at construction."""

    x_min: float
    y_min: float
    x_max: float
    y_max: float

    def __post_init__(self):
        if min(self.x_min, self.y_min, self.x_max, self.y_max) < 0:
            raise NegativeCoordinate(f"negative coordinate in {self.as_list()}")
        if self.x_min >= self.x_max or self.y_min >= self.y_max:
            raise DegenerateBox(f"degenerate box {self.as_list()}")

    @property
    def area(self) -> float:
        return (self.x_max - self.x_min) * (self.y_max - self.y_min)

    def as_list(self) -> list:
        return [self.x_min, self.y_min, self.x_max, self.y_max]

    def as_int_list(self) -> list:
        return [round_half_up(c) for c in self.as_list()]


def make_box(x_min, y_min, x_max, y_max) -> BoundingBox:
    return BoundingBox(float(x_min), float(y_min), float(x_max), float(y_max))


def box_contains_point(box: BoundingBox, x: float, y: float) -> bool:
    """Inclusive on all four edges: a point on the border counts as inside."""
    return box.x_min <= x <= box.x_max and box.y_min <= y <= box.y_max


@dataclass(frozen=True)
class FrameRef:
    video_id: str
    frame_index: int

    def __post_init__(self):
        if self.frame_index < 0:
            raise ValueError(f"frame_index must be >= 0, got {self.frame_index}")


@dataclass(frozen=True)
class BibId:
    """Official race number; renders as bare digits."""

    bib: int

    def __post_init__(self):
        if self.bib <= 0:
            raise MalformedIdentity(f"bib must be positive, got {self.bib}")

    def render(self) -> str:
        return str(self.bib)


@dataclass(frozen=True)
class UniqueId:
    """Fallback identity for a runner without a recoverable bib.

    Renders as L<location>R<runner>, e.g. L3R1.
    """

    location_number: int
    runner_number: int

    def __post_init__(self):
        if not 1 <= self.location_number <= 42:
            raise MalformedIdentity(
                f"location_number must be in 1..42, got {self.location_number}"
            )
        if self.runner_number < 1:
            raise MalformedIdentity(
                f"runner_number must be >= 1, got {self.runner_number}"
            )

    def render(self) -> str:
        return f"L{self.location_number}R{self.runner_number}"


Identity = Union[BibId, UniqueId]

_UNIQUE_ID_RE = re.compile(r"^L(\d+)R(\d+)$")


def parse_identity(text: str) -> Identity:
    """Inverse of render(): bare digits -> BibId, L<i>R<j> -> UniqueId."""
    if text.isdigit():
        return BibId(int(text))
    m = _UNIQUE_ID_RE.match(text)
    if m:
        return UniqueId(int(m.group(1)), int(m.group(2)))
    raise MalformedIdentity(f"unrecognized identity {text!r}")


@dataclass(frozen=True)
class KeyframeAnnotation:
    frame: FrameRef
    box: BoundingBox


@dataclass(frozen=True)
class Track:
    """One runner's keyframed annotation in one video.

    Keyframes are strictly increasing in frame index; a single-keyframe track
    densifies to exactly that one frame.
    """

    identity: Identity
    video_id: str
    keyframes: tuple

    def __post_init__(self):
        if len(self.keyframes) < 1:
            raise ValueError("track needs at least one keyframe")
        object.__setattr__(self, "keyframes", tuple(self.keyframes))
        indices = [kf.frame.frame_index for kf in self.keyframes]
        if any(b <= a for a, b in zip(indices, indices[1:])):
            raise ValueError(f"keyframes not strictly increasing: {indices}")


@dataclass(frozen=True)
class FrameRangeAnnotation:
    """Start/end frame of a runner's visibility, without boxes."""

    identity: Identity
    video_id: str
    start_frame: int
    end_frame: int

    def __post_init__(self):
        if self.start_frame > self.end_frame:
            raise ValueError(
                f"start_frame {self.start_frame} > end_frame {self.end_frame}"
            )


@dataclass(frozen=True)
class Detection:
    frame: FrameRef
    box: BoundingBox
    confidence: float
    label: Identity | None = None

    def __post_init__(self):
        if not 0.0 <= self.confidence <= 1.0:
            raise ValueError(f"confidence must be in [0,1], got {self.confidence}")


@dataclass(frozen=True)
class PathPoint:
    """One mouse-trajectory sample of a runner's path."""

    frame_index: int
    x: float
    y: float

    def __post_init__(self):
        if self.x < 0 or self.y < 0:
            raise NegativeCoordinate(f"path point ({self.x}, {self.y})")


_TIME_RE = re.compile(r"^(?:(\d{1,2}):)?([0-5]\d|\d):([0-5]\d)$")


def parse_clock_time(text: str) -> int:
    """Parse H:MM:SS, HH:MM:SS, or MM:SS into total seconds."""
    m = _TIME_RE.match(text.strip())
    if not m:
        raise MalformedTime(f"cannot parse clock time {text!r}")
    hours, minutes, seconds = m.group(1), int(m.group(2)), int(m.group(3))
    return (int(hours) if hours is not None else 0) * 3600 + minutes * 60 + seconds


def format_clock_time(total_s: int) -> str:
    h, rem = divmod(int(total_s), 3600)
    m, s = divmod(rem, 60)
    return f"{h}:{m:02d}:{s:02d}"


# --- annotation document (one file per video) -------------------------------

def canonical_json(obj) -> str:
    """Stable serialization: sorted keys, no extra whitespace."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def _num(value: float):
    """Emit whole floats as ints so hand-written files round-trip cleanly."""
    return int(value) if float(value).is_integer() else float(value)


def track_to_dict(track: Track) -> dict:
    return {
        "identity": track.identity.render(),
        "keyframes": [
            {
                "frame_index": kf.frame.frame_index,
                "box": [_num(c) for c in kf.box.as_list()],
            }
            for kf in track.keyframes
        ],
    }


def track_from_dict(data: dict, video_id: str) -> Track:
    keyframes = [
        KeyframeAnnotation(
            frame=FrameRef(video_id, int(kf["frame_index"])),
            box=make_box(*kf["box"]),
        )
        for kf in data["keyframes"]
    ]
    return Track(parse_identity(data["identity"]), video_id, tuple(keyframes))


def annotation_doc_to_dict(video_id, tracks, frame_ranges) -> dict:
    return {
        "video_id": video_id,
        "fps_source": SOURCE_FPS,
        "tracks": [track_to_dict(t) for t in tracks],
        "frame_ranges": [
            {
                "identity": fr.identity.render(),
                "start_frame": fr.start_frame,
                "end_frame": fr.end_frame,
            }
            for fr in frame_ranges
        ],
    }


def annotation_doc_from_dict(data: dict):
    video_id = data["video_id"]
    tracks = [track_from_dict(t, video_id) for t in data.get("tracks", [])]
    ranges = [
        FrameRangeAnnotation(
            identity=parse_identity(fr["identity"]),
            video_id=video_id,
            start_frame=int(fr["start_frame"]),
            end_frame=int(fr["end_frame"]),
        )
        for fr in data.get("frame_ranges", [])
    ]
    return video_id, tracks, ranges


def detections_to_list(detections) -> list:
    return [
        {
            "frame_index": d.frame.frame_index,
            "box": [_num(c) for c in d.box.as_list()],
            "confidence": _num(d.confidence),
            **({"label": d.label.render()} if d.label is not None else {}),
        }
        for d in detections
    ]


def detections_from_list(data: list, video_id: str) -> list:
    return [
        Detection(
            frame=FrameRef(video_id, int(d["frame_index"])),
            box=make_box(*d["box"]),
            confidence=float(d["confidence"]),
            label=parse_identity(d["label"]) if "label" in d else None,
        )
        for d in data
    ]
