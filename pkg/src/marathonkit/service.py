"""HTTP API over the library: frames, annotations, previews, evaluation, and
alignment queries.

Revision tokens travel as the `ETag` response header and the `If-Match`
request header. /interpolate and /evaluate are pure: identical bodies yield
identical responses and nothing is persisted.
"""

from __future__ import annotations

import json
import os
import threading
from pathlib import Path

from fastapi import Body, FastAPI, Header, HTTPException, Query, Request, Response

from . import alignment, bbox, core, ingest
from .errors import MarathonKitError, NonDivisorFps
from .store import AnnotationStore, NotFound, RevisionConflict

DEFAULT_PORT = 8008


def _load_optional(path, loader, default):
    return loader(path) if Path(path).exists() else default


def create_app(
    data_root,
    delta_t_default: float = alignment.DEFAULT_DELTA_T_S,
    reid_top_k: int = alignment.DEFAULT_REID_TOP_K,
) -> FastAPI:
    """Build the service over a data root directory.

    Expected layout (all parts optional except the root itself):
      videos.json            video manifest
      runners.csv            runner records
      checkpoints.csv        location_number,distance_km table
      gallery.json           re-id gallery features
      frames/<video_id>/     frame images
      annotations/           store-managed documents
    """
    root = Path(data_root)
    if not root.is_dir():
        raise MarathonKitError(f"data root {root} does not exist")

    store = AnnotationStore(root)
    videos = _load_optional(root / "videos.json", ingest.load_video_manifest, [])
    records = _load_optional(root / "runners.csv", ingest.load_runner_csv, [])
    checkpoints = _load_optional(
        root / "checkpoints.csv", alignment.load_checkpoints_csv, []
    )
    gallery = _load_optional(root / "gallery.json", alignment.load_gallery_json, [])
    records_by_bib = {r.bib: r for r in records}
    timelines = [alignment.compute_timeline(r, checkpoints) for r in records] if checkpoints else []

    counter = alignment.UniqueIdCounter(store.load_counter_state())
    counter_lock = threading.Lock()

    app = FastAPI(title="marathonkit")

    @app.exception_handler(MarathonKitError)
    async def _domain_error(request: Request, exc: MarathonKitError):
        status = 404 if isinstance(exc, NotFound) else 409 if isinstance(exc, RevisionConflict) else 400
        return Response(
            content=json.dumps({"error": type(exc).__name__, "detail": str(exc)}),
            status_code=status,
            media_type="application/json",
        )

    @app.exception_handler(ValueError)
    @app.exception_handler(KeyError)
    async def _malformed_body(request: Request, exc: Exception):
        return Response(
            content=json.dumps({"error": type(exc).__name__, "detail": str(exc)}),
            status_code=400,
            media_type="application/json",
        )

    # --- videos and frames ---------------------------------------------------

    @app.get("/videos")
    def list_videos():
        return [
            {
                "video_id": v.video_id,
                "FileName": v.file_name,
                "FileSize": v.file_size_mb,
                "FileType": v.file_type,
                "Duration": v.duration_s,
                "VideoFrameRate": v.frame_rate,
                "ImageSize": f"{v.width}x{v.height}",
                "TrackCreateDate": v.track_create_date,
                "GPSCoordinates": f"{v.gps[0]} {v.gps[1]}" if v.gps else None,
                "LocationNumber": v.location_number,
            }
            for v in videos
        ]

    def _frame_dir(video_id: str) -> Path:
        d = root / "frames" / video_id
        if not d.is_dir():
            raise HTTPException(404, f"unknown video {video_id}")
        return d

    @app.get("/videos/{video_id}/frames/{index}")
    def get_frame(video_id: str, index: int):
        seq = ingest.load_frame_sequence(video_id, _frame_dir(video_id))
        if not 0 <= index < seq.frame_count:
            raise HTTPException(404, f"frame {index} out of range")
        path = Path(seq.directory) / seq.frame_files[index]
        media = "image/png" if path.suffix.lower() == ".png" else "image/jpeg"
        return Response(content=path.read_bytes(), media_type=media)

    @app.get("/videos/{video_id}/frames")
    def list_frames(video_id: str, fps: int = Query(default=core.SOURCE_FPS)):
        seq = ingest.load_frame_sequence(video_id, _frame_dir(video_id))
        try:
            indices = ingest.subsample_frames(seq, fps)
        except NonDivisorFps as exc:
            raise HTTPException(400, str(exc)) from exc
        return {"video_id": video_id, "fps": fps, "frame_indices": indices}

    # --- tracks and ranges -----------------------------------------------------

    @app.get("/videos/{video_id}/tracks/{identity}")
    def get_track(video_id: str, identity: str):
        data, rev = store.get_track(video_id, identity)
        return Response(content=data, media_type="application/json",
                        headers={"ETag": rev})

    @app.put("/videos/{video_id}/tracks/{identity}")
    def put_track(
        video_id: str,
        identity: str,
        body: dict = Body(...),
        if_match: str | None = Header(default=None),
    ):
        if body.get("identity") != identity:
            raise HTTPException(400, "identity in body does not match URL")
        try:
            core.track_from_dict(body, video_id)  # validate before persisting
        except (ValueError, KeyError, TypeError) as exc:
            raise HTTPException(400, f"invalid track: {exc}") from exc
        rev = store.put_track(video_id, body, revision=if_match)
        return Response(status_code=200, headers={"ETag": rev})

    @app.delete("/videos/{video_id}/tracks/{identity}")
    def delete_track(video_id: str, identity: str):
        store.delete_track(video_id, identity)
        return {"deleted": identity}

    @app.get("/videos/{video_id}/ranges")
    def get_ranges(video_id: str):
        return {"video_id": video_id, "frame_ranges": store.list_ranges(video_id)}

    # --- pure computation endpoints ------------------------------------------

    @app.post("/interpolate")
    def interpolate(body: dict = Body(...)):
        track = core.track_from_dict(
            {"identity": body.get("identity", "1"), "keyframes": body["keyframes"]},
            body.get("video_id", "preview"),
        )
        dense = bbox.interpolate_track(track)
        return {
            "boxes": [
                {"frame_index": f, "box": dense[f].as_list()} for f in sorted(dense)
            ]
        }

    @app.post("/link")
    def link(body: dict = Body(...)):
        video_id = body.get("video_id", "preview")
        paths = {
            core.parse_identity(identity): [
                core.PathPoint(int(p[0]), float(p[1]), float(p[2])) for p in pts
            ]
            for identity, pts in body["paths"].items()
        }
        detections = core.detections_from_list(body["detections"], video_id)
        result = bbox.link_paths_to_detections(paths, detections)
        return {
            "labeled": core.detections_to_list(result.labeled),
            "ambiguous": [
                {
                    "detection": core.detections_to_list([det])[0],
                    "identities": [i.render() for i in ids],
                }
                for det, ids in result.ambiguous
            ],
            "eliminated": core.detections_to_list(result.eliminated),
        }

    @app.post("/evaluate")
    def evaluate(body: dict = Body(...)):
        video_id = body.get("video_id", "eval")
        ground_truth = {
            int(frame): {
                key: core.make_box(*box_coords) for key, box_coords in boxes.items()
            }
            for frame, boxes in body["ground_truth"].items()
        }
        predictions = core.detections_from_list(body["predictions"], video_id)
        report = bbox.match_frames(ground_truth, predictions)
        metrics = bbox.precision_recall_f1(report.tp, report.fp, report.fn)
        workload = bbox.workload_estimate(
            n_removals=report.fp,
            n_additions=report.fn,
            n_adjustments=0,
            n_labels=report.tp,
            unit_costs=body.get("unit_costs"),
        )
        return {
            "tp": report.tp,
            "fp": report.fp,
            "fn": report.fn,
            "precision": round(metrics.precision, 4),
            "recall": round(metrics.recall, 4),
            "f1": round(metrics.f1, 4),
            "workload": {
                "n_removals": workload.n_removals,
                "n_additions": workload.n_additions,
                "n_adjustments": workload.n_adjustments,
                "n_labels": workload.n_labels,
                "total_s": workload.total_s,
            },
        }

    # --- runners and alignment -------------------------------------------------

    @app.get("/runners")
    def search_runners(name: str = "", bib: str = ""):
        fragment = name or bib
        hits = alignment.partial_search(records, fragment) if fragment else list(records)
        return [
            {
                "bib": r.bib,
                "name": r.name,
                "gender": r.gender,
                "countryCode": r.country_code,
                "race": r.race,
                "finish_time_s": r.finish_time_s,
            }
            for r in sorted(hits, key=lambda r: r.bib)
        ]

    @app.get("/runners/{bib}/timeline")
    def runner_timeline(bib: int):
        record = records_by_bib.get(bib)
        if record is None:
            raise HTTPException(404, f"unknown bib {bib}")
        tl = alignment.compute_timeline(record, checkpoints)
        return {
            "bib": bib,
            "entries": [
                {
                    "location_number": e.location_number,
                    "distance_km": e.distance_km,
                    "estimated_passing_s": e.estimated_passing_s,
                }
                for e in tl.entries
            ],
        }

    @app.get("/alignment")
    def alignment_query(
        location: int, t: float, dt: float | None = None
    ):
        delta = delta_t_default if dt is None else dt
        bibs = alignment.time_window_query(timelines, location, t, delta)
        return {"location": location, "t": t, "dt": delta, "bibs": bibs}

    @app.post("/unique-id")
    def next_unique_id(body: dict = Body(...)):
        with counter_lock:
            uid = counter.assign(int(body["location"]))
            store.save_counter_state(counter.state())
        return {"unique_id": uid.render()}

    @app.post("/reid/query")
    def reid_query(body: dict = Body(...)):
        if "probe_feature" in body:
            probe = body["probe_feature"]
        elif "probe_pixels" in body:
            import numpy as np

            pixels = np.asarray(body["probe_pixels"], dtype="uint8")
            probe = alignment.baseline_embed(pixels)
        else:
            raise HTTPException(400, "need probe_feature or probe_pixels")
        k = int(body.get("k", reid_top_k))
        ranking = alignment.reid_rank(gallery, probe, k=k)
        return {
            "matches": [
                {"image_id": image_id, "distance": distance}
                for image_id, distance in ranking
            ]
        }

    return app


def serve(data_root, port: int = DEFAULT_PORT, host: str = "127.0.0.1"):
    """Run the service until interrupted. Config also honors PORT/DATA_ROOT."""
    import uvicorn

    app = create_app(
        data_root,
        delta_t_default=float(os.environ.get("DELTA_T_DEFAULT", alignment.DEFAULT_DELTA_T_S)),
        reid_top_k=int(os.environ.get("REID_TOP_K", alignment.DEFAULT_REID_TOP_K)),
    )
    uvicorn.run(app, host=host, port=port)
