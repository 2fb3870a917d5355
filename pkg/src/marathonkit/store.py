"""File-backed annotation store with atomic writes and revision tokens.

Every document is a text file under the data root; writes go to a temp file
in the same directory and are renamed into place, so the on-disk state after
a crash is always some prefix of the acknowledged writes. Revision tokens are
content hashes: optimistic concurrency without extra bookkeeping files.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
import threading
from pathlib import Path

from . import core
from .errors import MarathonKitError


class RevisionConflict(MarathonKitError):
    """Supplied revision token does not match the stored document."""


class NotFound(MarathonKitError):
    """Requested document does not exist."""


def revision_of(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


class AnnotationStore:
    """Per-video annotation documents plus unique-id counter persistence.

    Writes are serialized per store instance with a single lock; reads are
    plain file reads and may run concurrently.
    """

    def __init__(self, root):
        self.root = Path(root)
        (self.root / "annotations").mkdir(parents=True, exist_ok=True)
        self._lock = threading.Lock()

    # --- low-level ---------------------------------------------------------

    def _annotation_path(self, video_id: str) -> Path:
        if "/" in video_id or video_id in ("", ".", ".."):
            raise MarathonKitError(f"bad video id {video_id!r}")
        return self.root / "annotations" / f"{video_id}.json"

    @staticmethod
    def _atomic_write(path: Path, data: bytes):
        fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
        try:
            with os.fdopen(fd, "wb") as fh:
                fh.write(data)
                fh.flush()
                os.fsync(fh.fileno())
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise

    # --- annotation documents ----------------------------------------------

    def load_doc(self, video_id: str) -> dict:
        path = self._annotation_path(video_id)
        if not path.exists():
            return core.annotation_doc_to_dict(video_id, [], [])
        return json.loads(path.read_text())

    def save_doc(self, video_id: str, doc: dict):
        data = core.canonical_json(doc).encode()
        self._atomic_write(self._annotation_path(video_id), data)

    # --- tracks -------------------------------------------------------------

    def get_track(self, video_id: str, identity: str):
        """Returns (canonical track bytes, revision token)."""
        doc = self.load_doc(video_id)
        for t in doc.get("tracks", []):
            if t["identity"] == identity:
                data = core.canonical_json(t).encode()
                return data, revision_of(data)
        raise NotFound(f"track {identity} in video {video_id}")

    def put_track(self, video_id: str, track_dict: dict, revision=None) -> str:
        """Insert or replace one track; returns the new revision token.

        If the track exists, a matching `revision` token (or an identical
        body, which makes retries idempotent) is required; a stale token is a
        conflict. Creating a new track needs no token.
        """
        new_data = core.canonical_json(track_dict).encode()
        identity = track_dict["identity"]
        with self._lock:
            doc = self.load_doc(video_id)
            tracks = doc.setdefault("tracks", [])
            existing_idx = next(
                (i for i, t in enumerate(tracks) if t["identity"] == identity), None
            )
            if existing_idx is not None:
                current = core.canonical_json(tracks[existing_idx]).encode()
                if current != new_data and revision != revision_of(current):
                    raise RevisionConflict(
                        f"track {identity} in video {video_id} was modified"
                    )
                tracks[existing_idx] = track_dict
            else:
                tracks.append(track_dict)
            self.save_doc(video_id, doc)
        return revision_of(new_data)

    def delete_track(self, video_id: str, identity: str):
        with self._lock:
            doc = self.load_doc(video_id)
            tracks = doc.get("tracks", [])
            remaining = [t for t in tracks if t["identity"] != identity]
            if len(remaining) == len(tracks):
                raise NotFound(f"track {identity} in video {video_id}")
            doc["tracks"] = remaining
            self.save_doc(video_id, doc)

    def list_ranges(self, video_id: str) -> list:
        return self.load_doc(video_id).get("frame_ranges", [])

    # --- unique-id counters ---------------------------------------------------

    def load_counter_state(self) -> dict:
        path = self.root / "unique_id_counters.json"
        return json.loads(path.read_text()) if path.exists() else {}

    def save_counter_state(self, state: dict):
        self._atomic_write(
            self.root / "unique_id_counters.json",
            core.canonical_json(state).encode(),
        )
