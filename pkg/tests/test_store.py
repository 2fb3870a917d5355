import json

import pytest

from marathonkit import core
from marathonkit.store import AnnotationStore, NotFound, RevisionConflict, revision_of


def track_dict(identity="7", frames=(0, 10)):
    return {
        "identity": identity,
        "keyframes": [
            {"frame_index": f, "box": [0, 0, 10 + f, 10 + f]} for f in frames
        ],
    }


@pytest.fixture
def store(tmp_path):
    return AnnotationStore(tmp_path)


class TestTrackLifecycle:
    def test_put_then_get_byte_equal(self, store):
        body = track_dict()
        rev = store.put_track("vid1", body)
        data, got_rev = store.get_track("vid1", "7")
        assert data == core.canonical_json(body).encode()
        assert got_rev == rev == revision_of(data)

    def test_get_missing(self, store):
        with pytest.raises(NotFound):
            store.get_track("vid1", "7")

    def test_update_with_current_revision(self, store):
        rev = store.put_track("vid1", track_dict())
        updated = track_dict(frames=(0, 10, 20))
        rev2 = store.put_track("vid1", updated, revision=rev)
        assert rev2 != rev
        data, _ = store.get_track("vid1", "7")
        assert json.loads(data) == updated

    def test_stale_revision_conflicts(self, store):
        rev = store.put_track("vid1", track_dict())
        store.put_track("vid1", track_dict(frames=(0, 10, 20)), revision=rev)
        with pytest.raises(RevisionConflict):
            store.put_track("vid1", track_dict(frames=(0, 5)), revision=rev)

    def test_identical_body_is_idempotent(self, store):
        store.put_track("vid1", track_dict())
        # same bytes, no token: acknowledged as a no-op retry
        rev = store.put_track("vid1", track_dict())
        data, _ = store.get_track("vid1", "7")
        assert revision_of(data) == rev

    def test_delete(self, store):
        store.put_track("vid1", track_dict())
        store.delete_track("vid1", "7")
        with pytest.raises(NotFound):
            store.get_track("vid1", "7")

    def test_delete_missing(self, store):
        with pytest.raises(NotFound):
            store.delete_track("vid1", "7")

    def test_tracks_isolated_per_video(self, store):
        store.put_track("vid1", track_dict())
        with pytest.raises(NotFound):
            store.get_track("vid2", "7")


class TestDocumentFormat:
    def test_on_disk_document_shape(self, store, tmp_path):
        store.put_track("vid1", track_dict())
        doc = json.loads((tmp_path / "annotations" / "vid1.json").read_text())
        assert doc["video_id"] == "vid1"
        assert doc["fps_source"] == 30
        assert doc["tracks"][0]["identity"] == "7"
        assert doc["frame_ranges"] == []

    def test_no_temp_files_left_behind(self, store, tmp_path):
        store.put_track("vid1", track_dict())
        store.put_track("vid1", track_dict(identity="8"))
        store.put_track("vid2", track_dict(identity="L3R1"))
        leftovers = list((tmp_path / "annotations").glob("*.tmp"))
        assert leftovers == []

    def test_bad_video_id_rejected(self, store):
        from marathonkit.errors import MarathonKitError

        with pytest.raises(MarathonKitError):
            store.get_track("../evil", "7")


class TestCounterState:
    def test_roundtrip(self, store):
        store.save_counter_state({"3": 5})
        assert store.load_counter_state() == {"3": 5}

    def test_missing_is_empty(self, store):
        assert store.load_counter_state() == {}
