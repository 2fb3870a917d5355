"""marathonkit: annotation toolkit for multi-camera marathon footage.

Submodules:
  core       domain types, geometry, annotation file schemas
  ingest     video manifests, frame sequences, runner CSVs, fps subsampling
  sampling   location scenario scores and KS-based subset selection
  bbox       keyframe interpolation, path linking, evaluation metrics
  alignment  runner timelines, dashboard queries, LiRj ids, re-id ranking
  store      file-backed annotation persistence with revision tokens
  service    HTTP API over the library
  cli        batch command-line entry points
"""

from .core import (
    BibId,
    BoundingBox,
    Detection,
    FrameRangeAnnotation,
    FrameRef,
    KeyframeAnnotation,
    PathPoint,
    Track,
    UniqueId,
    box_contains_point,
    make_box,
    parse_clock_time,
    parse_identity,
)

__version__ = "0.1.0"

__all__ = [
    "BibId",
    "BoundingBox",
    "Detection",
    "FrameRangeAnnotation",
    "FrameRef",
    "KeyframeAnnotation",
    "PathPoint",
    "Track",
    "UniqueId",
    "box_contains_point",
    "make_box",
    "parse_clock_time",
    "parse_identity",
    "__version__",
]
