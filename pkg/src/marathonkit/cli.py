"""Batch command-line entry points over the library.

Output is machine-readable JSON on stdout by default; pass --pretty for a
human-oriented rendering. Exit codes: 0 success, 1 validation error, 2 I/O
error.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import alignment, bbox, core, ingest, sampling
from .errors import MarathonKitError

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_IO = 2


def _emit(payload, pretty: bool):
    if pretty:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(json.dumps(payload, sort_keys=True))


def _read_json(path):
    with open(path) as fh:
        return json.load(fh)


# --- subcommand implementations ----------------------------------------------

def cmd_ingest(args):
    videos = ingest.load_video_manifest(args.manifest)
    stats = ingest.dataset_stats(videos)
    return {"videos": len(videos), "stats": stats}


def cmd_subsample(args):
    if args.frames is not None:
        count = args.frames
    else:
        count = ingest.load_frame_sequence("cli", args.frame_dir).frame_count
    indices = ingest.subsample_frames(count, args.fps)
    return {"fps": args.fps, "count": len(indices), "frame_indices": indices}


def cmd_sample_locations(args):
    scores = sampling.load_scores_csv(args.scores)
    totals = [s.total for s in scores]
    result = sampling.select_sample_scores(
        totals,
        k=args.k,
        c_alpha=args.c_alpha,
        iterations=args.iterations,
        seed=args.seed,
        exhaustive=args.exhaustive,
    )
    ks = result["ks"]
    return {
        "subset": result["subset"],
        "locations": sampling.locations_for_scores(scores, result["subset"]),
        "statistic": ks.statistic,
        "critical_value": ks.critical_value,
        "accepted": ks.accepted,
    }


def cmd_interpolate(args):
    data = _read_json(args.track)
    track = core.track_from_dict(data, data.get("video_id", "cli"))
    dense = bbox.interpolate_track(track)
    boxes = [{"frame_index": f, "box": dense[f].as_list()} for f in sorted(dense)]
    if args.out:
        with open(args.out, "w") as fh:
            json.dump({"identity": track.identity.render(), "boxes": boxes}, fh)
    return {"identity": track.identity.render(), "boxes": boxes}


def cmd_link(args):
    paths_data = _read_json(args.paths)
    paths = {
        core.parse_identity(identity): [
            core.PathPoint(int(p[0]), float(p[1]), float(p[2])) for p in pts
        ]
        for identity, pts in paths_data.items()
    }
    detections = core.detections_from_list(_read_json(args.detections), "cli")
    result = bbox.link_paths_to_detections(paths, detections)
    payload = {
        "labeled": core.detections_to_list(result.labeled),
        "ambiguous": [
            {
                "detection": core.detections_to_list([det])[0],
                "identities": [i.render() for i in ids],
            }
            for det, ids in result.ambiguous
        ],
        "eliminated": len(result.eliminated),
    }
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(payload["labeled"], fh)
    return payload


def cmd_evaluate(args):
    gt_doc = _read_json(args.gt)
    video_id, tracks, _ = core.annotation_doc_from_dict(gt_doc)
    ground_truth: dict = {}
    for track in tracks:
        for f, box in bbox.interpolate_track(track).items():
            ground_truth.setdefault(f, {})[track.identity.render()] = box
    predictions = core.detections_from_list(_read_json(args.pred), video_id)
    report = bbox.match_frames(ground_truth, predictions)
    metrics = bbox.precision_recall_f1(report.tp, report.fp, report.fn)
    workload = bbox.workload_estimate(
        n_removals=report.fp, n_additions=report.fn, n_adjustments=0,
        n_labels=report.tp,
    )
    if args.pretty:
        print(bbox.format_metric_report(report, metrics, workload))
        return None
    return {
        "tp": report.tp, "fp": report.fp, "fn": report.fn,
        "precision": round(metrics.precision, 4),
        "recall": round(metrics.recall, 4),
        "f1": round(metrics.f1, 4),
        "workload_s": workload.total_s,
    }


def cmd_timeline(args):
    records = ingest.load_runner_csv(args.runners)
    checkpoints = alignment.load_checkpoints_csv(args.checkpoints)
    if args.bib is not None:
        records = [r for r in records if r.bib == args.bib]
        if not records:
            raise MarathonKitError(f"bib {args.bib} not in {args.runners}")
    timelines = [alignment.compute_timeline(r, checkpoints) for r in records]
    if args.out:
        alignment.save_timelines_csv(timelines, args.out)
    return {
        "timelines": [
            {
                "bib": tl.bib,
                "entries": [
                    [e.location_number, e.distance_km, e.estimated_passing_s]
                    for e in tl.entries
                ],
            }
            for tl in timelines
        ]
    }


def cmd_align_query(args):
    records = ingest.load_runner_csv(args.runners)
    checkpoints = alignment.load_checkpoints_csv(args.checkpoints)
    timelines = [alignment.compute_timeline(r, checkpoints) for r in records]
    bibs = alignment.time_window_query(timelines, args.location, args.t, args.dt)
    return {"location": args.location, "t": args.t, "dt": args.dt, "bibs": bibs}


def cmd_reid_rank(args):
    gallery = alignment.load_gallery_json(args.gallery)
    if args.probe_image:
        probe = alignment.baseline_embed(args.probe_image)
    else:
        probe = _read_json(args.probe)
    ranking = alignment.reid_rank(gallery, probe, k=args.k)
    return {
        "matches": [
            {"image_id": image_id, "distance": distance}
            for image_id, distance in ranking
        ]
    }


def cmd_serve(args):
    from .service import serve

    serve(args.data_root, port=args.port, host=args.host)
    return None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="marathonkit",
        description="Annotation toolkit for multi-camera marathon footage.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(func=func)
        p.add_argument("--pretty", action="store_true",
                       help="human-readable output instead of compact JSON")
        return p

    p = add("ingest", cmd_ingest, "load a video manifest and print dataset statistics")
    p.add_argument("--manifest", required=True, help="video manifest JSON")

    p = add("subsample", cmd_subsample, "frame indices kept at a target fps")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--frames", type=int, help="frame count of the sequence")
    group.add_argument("--frame-dir", help="frame-image directory")
    p.add_argument("--fps", type=int, required=True, help="target fps (divisor of 30)")

    p = add("sample-locations", cmd_sample_locations,
            "KS-matched representative subset of location scores")
    p.add_argument("--scores", required=True, help="location scores CSV")
    p.add_argument("--k", type=int, default=6)
    p.add_argument("--c-alpha", type=float, default=1.63)
    p.add_argument("--iterations", type=int, default=10000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--exhaustive", action="store_true",
                   help="scan every k-combination instead of random search")

    p = add("interpolate", cmd_interpolate, "densify a keyframed track")
    p.add_argument("--track", required=True, help="track JSON (identity + keyframes)")
    p.add_argument("--out", help="write dense boxes JSON here")

    p = add("link", cmd_link, "link path supervision to detections")
    p.add_argument("--paths", required=True,
                   help="JSON {identity: [[frame,x,y], ...]}")
    p.add_argument("--detections", required=True, help="detections JSON list")
    p.add_argument("--out", help="write labeled detections here")

    p = add("evaluate", cmd_evaluate, "match predictions against ground truth")
    p.add_argument("--gt", required=True, help="annotation document JSON")
    p.add_argument("--pred", required=True, help="detections JSON list")

    p = add("timeline", cmd_timeline, "estimated passing times per checkpoint")
    p.add_argument("--runners", required=True, help="runner records CSV")
    p.add_argument("--checkpoints", required=True, help="checkpoint table CSV")
    p.add_argument("--bib", type=int, help="restrict to one runner")
    p.add_argument("--out", help="write timeline CSV here")

    p = add("align-query", cmd_align_query, "bibs passing a location in a time window")
    p.add_argument("--runners", required=True)
    p.add_argument("--checkpoints", required=True)
    p.add_argument("--location", type=int, required=True)
    p.add_argument("--t", type=float, required=True, help="center of the window (s)")
    p.add_argument("--dt", type=float, default=alignment.DEFAULT_DELTA_T_S)

    p = add("reid-rank", cmd_reid_rank, "nearest gallery images for a probe")
    p.add_argument("--gallery", required=True, help="gallery features JSON")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--probe", help="probe feature JSON list")
    group.add_argument("--probe-image", help="probe image file (baseline embedder)")
    p.add_argument("--k", type=int, default=alignment.DEFAULT_REID_TOP_K)

    p = add("serve", cmd_serve, "run the HTTP service")
    p.add_argument("--data-root", required=True)
    p.add_argument("--port", type=int, default=8008)
    p.add_argument("--host", default="127.0.0.1")

    return parser


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        payload = args.func(args)
    except MarathonKitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return EXIT_IO
    if payload is not None:
        _emit(payload, args.pretty)
    return EXIT_OK


def main():
    raise SystemExit(run())


if __name__ == "__main__":
    main()
