"""Persistence: config parsing, store round-trips, atomic writes."""

import json
import subprocess
import sys
import textwrap

import numpy as np
import pytest

from conceptspace import (
    Ball,
    Box,
    Concept,
    DomainSpec,
    LearnerConfig,
    LearnerState,
    SpaceSpec,
    StoreError,
    ValidationError,
    load_config,
    load_store,
    save_store,
    space_fingerprint,
    store_from_doc,
    store_to_doc,
)
from conceptspace.store import atomic_write_json, load_json, space_from_doc

CONFIG = {
    "domains": [
        {"id": "color", "dim_names": ["h", "s", "b"], "weight": 1.0},
        {"id": "shape", "dim_names": ["x", "y"]},
    ],
    "sensitivity": 2.0,
    "learner": {"theta_new": 0.4, "eta": 0.2, "r0": 0.1},
}


def make_state():
    space, _ = space_from_doc(CONFIG)
    concepts = (
        Concept(
            id="c1",
            regions={
                "color": Ball("color", np.array([0.1, 0.2, 0.3]), 0.05),
                "shape": Box("shape", np.array([0.0, 0.0]), np.array([1.0, 1.0])),
            },
            count=4,
            label="apple",
            created_at=1,
        ),
        Concept(
            id="c2",
            regions={"color": Ball("color", np.array([0.7, 0.8, 0.9]), 0.05)},
            count=1,
            created_at=2,
        ),
    )
    return LearnerState(space=space, concepts=concepts, next_id=3)


class TestConfigParsing:
    def test_parses_domains_sensitivity_learner(self):
        space, learner = space_from_doc(CONFIG)
        assert space.domain_ids == ("color", "shape")
        assert space.sensitivity == 2.0
        assert space.domain("shape").weight == 1.0
        assert learner.theta_new == 0.4
        assert learner.r0 == 0.1

    def test_defaults_for_optional_sections(self):
        space, learner = space_from_doc({"domains": [{"id": "a", "dim_names": ["x"]}]})
        assert space.sensitivity == 1.0
        assert learner.theta_new == 0.5

    def test_unknown_keys_rejected_everywhere(self):
        with pytest.raises(ValidationError):
            space_from_doc({**CONFIG, "extra": 1})
        bad_domain = {"domains": [{"id": "a", "dim_names": ["x"], "shape": "ball"}]}
        with pytest.raises(ValidationError):
            space_from_doc(bad_domain)
        with pytest.raises(ValidationError):
            space_from_doc({"domains": [{"id": "a", "dim_names": ["x"]}], "learner": {"t": 1}})

    def test_duplicate_domain_ids_rejected(self):
        doc = {
            "domains": [
                {"id": "a", "dim_names": ["x"]},
                {"id": "a", "dim_names": ["y"]},
            ]
        }
        with pytest.raises(ValidationError):
            space_from_doc(doc)

    def test_negative_weight_rejected(self):
        doc = {"domains": [{"id": "a", "dim_names": ["x"], "weight": -2.0}]}
        with pytest.raises(ValidationError):
            space_from_doc(doc)

    def test_load_config_reports_json_location(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text('{\n  "domains": [\n')
        with pytest.raises(ValidationError) as err:
            load_config(path)
        assert "line 3" in str(err.value)

    def test_missing_file_is_a_store_error(self, tmp_path):
        with pytest.raises(StoreError):
            load_json(tmp_path / "absent.json")


class TestFingerprint:
    def test_stable_across_equal_spaces(self):
        a, _ = space_from_doc(CONFIG)
        b, _ = space_from_doc(json.loads(json.dumps(CONFIG)))
        assert space_fingerprint(a) == space_fingerprint(b)

    def test_sensitive_to_geometry_changes(self):
        base, _ = space_from_doc(CONFIG)
        changed = {**CONFIG, "sensitivity": 3.0}
        other, _ = space_from_doc(changed)
        assert space_fingerprint(base) != space_fingerprint(other)

    def test_ignores_learner_knobs(self):
        a, _ = space_from_doc(CONFIG)
        b, _ = space_from_doc({**CONFIG, "learner": {"theta_new": 0.9}})
        assert space_fingerprint(a) == space_fingerprint(b)


class TestStoreRoundTrip:
    def test_doc_round_trips_losslessly(self):
        state = make_state()
        cfg = LearnerConfig(theta_new=0.4, eta=0.2, r0=0.1)
        doc = store_to_doc(state, cfg)
        back_state, back_cfg = store_from_doc(doc)
        assert store_to_doc(back_state, back_cfg) == doc
        assert back_state.next_id == 3
        assert back_state.concepts[0].label == "apple"
        assert back_state.concepts[0].count == 4
        box = back_state.concepts[0].regions["shape"]
        assert np.array_equal(box.low, [0.0, 0.0])

    def test_file_round_trip(self, tmp_path):
        state = make_state()
        cfg = LearnerConfig()
        path = tmp_path / "store.json"
        save_store(state, cfg, path)
        back, _ = load_store(path)
        assert [c.id for c in back.concepts] == ["c1", "c2"]

    def test_fingerprint_mismatch_rejected(self):
        state = make_state()
        doc = store_to_doc(state, LearnerConfig())
        doc["fingerprint"] = "0" * 64
        with pytest.raises(StoreError) as err:
            store_from_doc(doc)
        assert "fingerprint" in str(err.value)

    def test_foreign_format_rejected(self):
        doc = store_to_doc(make_state(), LearnerConfig())
        doc["format"] = "something-else"
        with pytest.raises(StoreError):
            store_from_doc(doc)

    def test_unknown_region_kind_rejected(self):
        doc = store_to_doc(make_state(), LearnerConfig())
        doc["concepts"][0]["regions"]["color"] = {"kind": "cone", "apex": [0, 0, 0]}
        with pytest.raises(StoreError):
            store_from_doc(doc)

    def test_region_width_checked_against_space(self):
        doc = store_to_doc(make_state(), LearnerConfig())
        doc["concepts"][1]["regions"]["color"] = {
            "kind": "ball",
            "center": [0.1, 0.2],
            "radius": 0.05,
        }
        with pytest.raises(StoreError):
            store_from_doc(doc)

    def test_unknown_concept_domain_rejected(self):
        doc = store_to_doc(make_state(), LearnerConfig())
        doc["concepts"][1]["regions"]["sound"] = {
            "kind": "ball",
            "center": [0.0],
            "radius": 1.0,
        }
        with pytest.raises(StoreError):
            store_from_doc(doc)


class TestAtomicWrite:
    def test_writes_readable_json(self, tmp_path):
        path = tmp_path / "doc.json"
        atomic_write_json({"b": 1, "a": [1.5, 2.5]}, path)
        assert json.loads(path.read_text()) == {"b": 1, "a": [1.5, 2.5]}

    def test_replaces_existing_file(self, tmp_path):
        path = tmp_path / "doc.json"
        atomic_write_json({"v": 1}, path)
        atomic_write_json({"v": 2}, path)
        assert json.loads(path.read_text()) == {"v": 2}
        leftovers = [p for p in tmp_path.iterdir() if p != path]
        assert leftovers == []

    def test_byte_identical_reruns(self, tmp_path):
        state = make_state()
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        save_store(state, LearnerConfig(), a)
        save_store(state, LearnerConfig(), b)
        assert a.read_bytes() == b.read_bytes()

    def test_kill_during_write_leaves_old_store_intact(self, tmp_path):
        """SIGKILL halfway through serialization must not touch the target.

        The child process writes a document whose nested dict keys kill the
        process from inside the key-sorting step, after earlier chunks of
        the stream are already out; the parent then checks that the
        previously saved bytes are still in place.
        """
        target = tmp_path / "store.json"
        atomic_write_json({"payload": "old and complete"}, target)
        before = target.read_bytes()

        script = textwrap.dedent(
            """
            import os, signal, sys
            from conceptspace.store import atomic_write_json

            class KillerKey(str):
                def __lt__(self, other):
                    os.kill(os.getpid(), signal.SIGKILL)
                    return str.__lt__(self, other)

            doc = {
                "a_first": "streams before the nested dict is reached",
                "z_nested": {KillerKey("b"): 1, KillerKey("a"): 2},
            }
            atomic_write_json(doc, sys.argv[1])
            print("unreachable")
            """
        )
        proc = subprocess.run(
            [sys.executable, "-c", script, str(target)],
            capture_output=True,
            text=True,
            timeout=60,
        )
        assert proc.returncode == -9, proc.stderr
        assert "unreachable" not in proc.stdout
        assert target.read_bytes() == before
