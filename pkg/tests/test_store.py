"""Canonical persistence: round trips, determinism, failure modes."""

import json
import random
import warnings

import pytest

from helpers import base_project, make_rod, random_session
from lpdesign import store
from lpdesign.errors import IntegrityError, ParseError, SaveRefused, VersionError
from lpdesign.model import validate


class TestSave:
    def test_deterministic_bytes(self, empty_project):
        assert store.save(empty_project) == store.save(empty_project)

    def test_empty_project_document(self, empty_project):
        obj = json.loads(store.save(empty_project))
        assert obj["format_version"] == 1
        assert obj["terminals"] == []
        assert obj["next_id"] == 1
        assert "general" in obj and "defaults" in obj

    def test_no_derived_geometry(self):
        p = base_project(make_rod(1, 0, 0, 10000))
        text = store.save(p).decode()
        assert "zone_type" in text
        for banned in ("contour", "h0", "radius_at", "polyline"):
            assert banned not in text

    def test_refuses_invalid(self):
        p = base_project(make_rod(1, 0, 0, -5))
        with pytest.raises(SaveRefused):
            store.save(p)

    def test_trailing_newline_and_utf8(self, empty_project):
        data = store.save(empty_project)
        assert data.endswith(b"\n")
        assert "Бумага" not in data.decode()  # schema keys are ASCII
        assert "План" in data.decode()  # values keep their language


class TestLoad:
    def test_round_trip_simple(self):
        p = base_project(make_rod(1, 0, 0, 10000))
        assert store.load(store.save(p)) == p

    def test_round_trip_randomized_sessions(self):
        for seed in range(40):
            p = random_session(random.Random(seed), 30)
            data = store.save(p)
            q = store.load(data)
            assert q == p
            assert store.save(q) == data

    def test_truncated_file(self, empty_project):
        data = store.save(empty_project)[:-40]
        with pytest.raises(ParseError) as err:
            store.load(data)
        assert err.value.line is not None

    def test_not_json(self):
        with pytest.raises(ParseError):
            store.load(b"\xff\xfe broken")
        with pytest.raises(ParseError):
            store.load(b"not json at all")

    def test_version_gate(self, empty_project):
        obj = json.loads(store.save(empty_project))
        obj["format_version"] = 2
        with pytest.raises(VersionError):
            store.load(json.dumps(obj).encode())

    def test_unknown_keys_rejected(self, empty_project):
        obj = json.loads(store.save(empty_project))
        obj["extra_settings"] = {}
        with pytest.raises(ParseError):
            store.load(json.dumps(obj).encode())

    def test_dangling_ref_is_integrity_error(self):
        p = base_project(make_rod(1, 0, 0, 10000))
        obj = json.loads(store.save(p))
        obj["terminal_texts"] = [
            {
                "id": 5,
                "terminal_ref": 99,
                "section_ref": 0,
                "start_offset": [0.0, 0.0],
                "leader_point_offset": [0.0, 0.0],
                "leader_to_shelf_end": False,
            }
        ]
        obj["next_id"] = 6
        with pytest.raises(IntegrityError) as err:
            store.load(json.dumps(obj).encode())
        assert any("terminal_texts[0].terminal_ref" == v.path for v in err.value.violations)

    def test_checksum_drift_warns(self):
        p = base_project(make_rod(1, 0, 0, 10000))
        obj = json.loads(store.save(p))
        obj["formula_table_checksum"] = "0" * 64
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            q = store.load(json.dumps(obj).encode())
        assert validate(q) == []
        assert any(issubclass(w.category, store.StoreWarning) for w in caught)

    def test_nan_rejected(self, empty_project):
        text = store.save(empty_project).decode().replace('"next_id": 1', '"next_id": NaN')
        with pytest.raises(ParseError):
            store.load(text.encode())
