"""Keyframe densification, path-to-detection linking, and annotation metrics.

Covers IoU with the TP/FP/FN rule (IoU >= 0.8 is a true positive), greedy
per-frame matching, precision/recall/F1, the four-action workload model, and
the unidentified-runner rate.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Optional

from .core import BoundingBox, Detection, PathPoint, Track, box_contains_point, make_box
from .errors import UndefinedMetric, ZeroTotal

IOU_TP_THRESHOLD = 0.8

# Non-normative defaults; the source experiments report only aggregate times.
DEFAULT_UNIT_COSTS = {
    "removal": 3.0,
    "addition": 8.0,
    "adjustment": 6.0,
    "label": 2.0,
}


def iou(a: BoundingBox, b: BoundingBox) -> float:
    """Intersection over union; 0 when the boxes do not overlap."""
    ix = min(a.x_max, b.x_max) - max(a.x_min, b.x_min)
    iy = min(a.y_max, b.y_max) - max(a.y_min, b.y_min)
    if ix <= 0 or iy <= 0:
        return 0.0
    inter = ix * iy
    union = a.area + b.area - inter
    return inter / union


def classify(iou_value: Optional[float], detected: bool) -> str:
    """TP if detected with IoU at least 0.8, FP if detected below, else FN."""
    if not detected:
        return "FN"
    return "TP" if iou_value >= IOU_TP_THRESHOLD else "FP"


def interpolate_track(track: Track) -> dict:
    """Densify a keyframed track over every integer frame it spans.

    Each of the four box coordinates is linear in the frame index between
    consecutive keyframes; the output reproduces the keyframe boxes exactly.
    A single-keyframe track yields just that frame.
    """
    dense = {}
    kfs = track.keyframes
    dense[kfs[0].frame.frame_index] = kfs[0].box
    for (kf1, kf2) in zip(kfs, kfs[1:]):
        f1, f2 = kf1.frame.frame_index, kf2.frame.frame_index
        c1, c2 = kf1.box.as_list(), kf2.box.as_list()
        for f in range(f1 + 1, f2):
            t = (f - f1) / (f2 - f1)
            dense[f] = make_box(*(a + (b - a) * t for a, b in zip(c1, c2)))
        dense[f2] = kf2.box
    return dense


@dataclass(frozen=True)
class LinkResult:
    """Outcome of intersecting path supervision with raw detections."""

    labeled: tuple        # detections that contain exactly one runner's points
    ambiguous: tuple      # (detection, identities) kept unlabeled for manual fix
    eliminated: tuple     # detections containing no path point


def link_paths_to_detections(paths: dict, detections) -> LinkResult:
    """Keep a detection iff a path point of its frame lies inside-or-on it.

    `paths` maps identity -> list of PathPoint. A surviving detection carries
    the identity of the containing path. When points of two identities fall
    in the same detection on the same frame, the detection is reported as
    ambiguous and left unlabeled rather than silently resolved.
    """
    points_by_frame = defaultdict(list)
    for identity, pts in paths.items():
        for p in pts:
            points_by_frame[p.frame_index].append((identity, p))

    labeled, ambiguous, eliminated = [], [], []
    for det in detections:
        hits = {
            identity
            for identity, p in points_by_frame.get(det.frame.frame_index, ())
            if box_contains_point(det.box, p.x, p.y)
        }
        if not hits:
            eliminated.append(det)
        elif len(hits) == 1:
            labeled.append(
                Detection(det.frame, det.box, det.confidence, label=next(iter(hits)))
            )
        else:
            ambiguous.append((det, tuple(sorted(hits, key=lambda i: i.render()))))
    return LinkResult(tuple(labeled), tuple(ambiguous), tuple(eliminated))


@dataclass(frozen=True)
class MatchReport:
    tp: int
    fp: int
    fn: int
    assignments: tuple = ()  # (frame_index, gt_key, detection, iou) per matched pair


def match_frames(ground_truth: dict, predictions) -> MatchReport:
    """Greedy one-to-one matching per frame, descending IoU.

    `ground_truth` maps frame_index -> {identity_or_key: BoundingBox}. A
    matched pair counts as TP only at IoU >= 0.8; everything else falls out
    as FP (extra/bad detections) or FN (missed ground truths).
    """
    preds_by_frame = defaultdict(list)
    for det in predictions:
        preds_by_frame[det.frame.frame_index].append(det)

    tp = fp = fn = 0
    assignments = []
    frames = set(ground_truth) | set(preds_by_frame)
    for f in sorted(frames):
        gts = ground_truth.get(f, {})
        dets = preds_by_frame.get(f, [])
        pairs = [
            (iou(gt_box, det.box), gi, di)
            for gi, (gt_key, gt_box) in enumerate(gts.items())
            for di, det in enumerate(dets)
        ]
        pairs = [p for p in pairs if p[0] > 0]
        pairs.sort(key=lambda p: (-p[0], p[1], p[2]))
        used_gt, used_det = set(), set()
        gt_items = list(gts.items())
        for overlap, gi, di in pairs:
            if gi in used_gt or di in used_det:
                continue
            used_gt.add(gi)
            used_det.add(di)
            if overlap >= IOU_TP_THRESHOLD:
                tp += 1
            else:
                # low-overlap pair: detection is an FP, the runner stays missed
                fp += 1
                fn += 1
            assignments.append((f, gt_items[gi][0], dets[di], overlap))
        fp += len(dets) - len(used_det)
        fn += len(gts) - len(used_gt)
    return MatchReport(tp=tp, fp=fp, fn=fn, assignments=tuple(assignments))


@dataclass(frozen=True)
class Metrics:
    precision: float
    recall: float
    f1: float


def f1_score(p: float, r: float) -> float:
    """Harmonic mean of precision and recall; 0 when both are 0."""
    return 0.0 if p + r == 0 else 2 * p * r / (p + r)


def precision_recall_f1(tp: int, fp: int, fn: int) -> Metrics:
    if tp + fp == 0:
        raise UndefinedMetric("precision undefined: no detections")
    if tp + fn == 0:
        raise UndefinedMetric("recall undefined: no ground truths")
    p = tp / (tp + fp)
    r = tp / (tp + fn)
    return Metrics(precision=p, recall=r, f1=f1_score(p, r))


@dataclass(frozen=True)
class WorkloadEstimate:
    n_removals: int
    n_additions: int
    n_adjustments: int
    n_labels: int
    unit_costs: dict = field(default_factory=lambda: dict(DEFAULT_UNIT_COSTS))

    @property
    def total_s(self) -> float:
        c = self.unit_costs
        return (
            self.n_removals * c["removal"]
            + self.n_additions * c["addition"]
            + self.n_adjustments * c["adjustment"]
            + self.n_labels * c["label"]
        )


def workload_estimate(
    n_removals, n_additions, n_adjustments, n_labels, unit_costs=None
) -> WorkloadEstimate:
    """Cost-weighted total of the four manual annotation actions."""
    counts = (n_removals, n_additions, n_adjustments, n_labels)
    if any(c < 0 for c in counts):
        raise ValueError("counts must be non-negative")
    costs = dict(DEFAULT_UNIT_COSTS)
    if unit_costs:
        costs.update(unit_costs)
    if any(v < 0 for v in costs.values()):
        raise ValueError("unit costs must be non-negative")
    return WorkloadEstimate(*counts, unit_costs=costs)


def unidentified_rate(total: int, identified: int) -> float:
    """Percentage of runners whose identity could not be aligned."""
    if total <= 0:
        raise ZeroTotal("total must be > 0")
    if not 0 <= identified <= total:
        raise ValueError(f"identified {identified} outside [0, {total}]")
    return (total - identified) / total * 100.0


def format_metric_report(report: MatchReport, metrics, workload=None) -> str:
    """Plain-text evaluation summary with 4-decimal metric values."""
    lines = [
        f"tp {report.tp}",
        f"fp {report.fp}",
        f"fn {report.fn}",
        f"precision {metrics.precision:.4f}",
        f"recall {metrics.recall:.4f}",
        f"f1 {metrics.f1:.4f}",
    ]
    if workload is not None:
        lines += [
            f"removals {workload.n_removals}",
            f"additions {workload.n_additions}",
            f"adjustments {workload.n_adjustments}",
            f"labels {workload.n_labels}",
            f"workload_s {workload.total_s:.1f}",
        ]
    return "\n".join(lines)
