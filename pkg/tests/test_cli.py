"""Command-line behavior: subcommands, exit codes, stream discipline."""

import json

import pytest

from conceptspace.cli import CONFIG_ENV_VAR, main

POS_CONFIG = {
    "domains": [{"id": "pos", "dim_names": ["x", "y"], "weight": 1.0}],
    "sensitivity": 10.0,
    "learner": {"theta_new": 0.5, "eta": 0.1, "r0": 0.05},
}

COLOR_CONFIG = {
    "domains": [{"id": "color", "dim_names": ["h", "s", "b"], "weight": 1.0}],
    "sensitivity": 10.0,
}


def write_json(path, doc):
    path.write_text(json.dumps(doc))
    return str(path)


def write_records(path, rows):
    path.write_text("".join(json.dumps(row) + "\n" for row in rows))
    return str(path)


def cluster_rows(domain="pos"):
    rows = []
    for i, (cx, cy) in enumerate([(0.1, 0.1), (0.9, 0.9)]):
        for j, off in enumerate([0.0, 0.01, -0.01]):
            rows.append(
                {
                    "item_id": f"i{i}{j}",
                    "domain_id": domain,
                    "vector": [cx + off, cy + off],
                }
            )
    return rows


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    out_lines = [line for line in captured.out.splitlines() if line]
    return code, out_lines, captured.err


@pytest.fixture
def pos_setup(tmp_path, capsys):
    cfg = write_json(tmp_path / "space.json", POS_CONFIG)
    store = str(tmp_path / "store.json")
    code, _, _ = run(capsys, "init", "--config", cfg, "--store", store)
    assert code == 0
    return cfg, store


class TestInit:
    def test_creates_store_file(self, tmp_path, capsys):
        cfg = write_json(tmp_path / "space.json", POS_CONFIG)
        store = tmp_path / "store.json"
        code, out, err = run(capsys, "init", "--config", cfg, "--store", str(store))
        assert code == 0
        assert out == []
        assert "initialized" in err
        doc = json.loads(store.read_text())
        assert doc["concepts"] == []

    def test_refuses_overwrite_without_force(self, pos_setup, capsys):
        cfg, store = pos_setup
        code, _, err = run(capsys, "init", "--config", cfg, "--store", store)
        assert code == 1
        assert "error:" in err and "--force" in err
        code, _, _ = run(capsys, "init", "--config", cfg, "--store", store, "--force")
        assert code == 0

    def test_bad_config_reports_and_fails(self, tmp_path, capsys):
        bad = dict(POS_CONFIG)
        bad["domains"] = POS_CONFIG["domains"] * 2
        cfg = write_json(tmp_path / "space.json", bad)
        code, out, err = run(capsys, "init", "--config", cfg, "--store", str(tmp_path / "s.json"))
        assert code == 1
        assert out == []
        assert "error:" in err

    def test_negative_weight_rejected(self, tmp_path, capsys):
        bad = {"domains": [{"id": "pos", "dim_names": ["x"], "weight": -1.0}]}
        cfg = write_json(tmp_path / "space.json", bad)
        code, _, err = run(capsys, "init", "--config", cfg, "--store", str(tmp_path / "s.json"))
        assert code == 1
        assert "error:" in err

    def test_env_var_supplies_config(self, tmp_path, capsys, monkeypatch):
        cfg = write_json(tmp_path / "space.json", POS_CONFIG)
        monkeypatch.setenv(CONFIG_ENV_VAR, cfg)
        code, _, _ = run(capsys, "init", "--store", str(tmp_path / "s.json"))
        assert code == 0

    def test_no_config_anywhere_fails(self, tmp_path, capsys, monkeypatch):
        monkeypatch.delenv(CONFIG_ENV_VAR, raising=False)
        code, _, err = run(capsys, "init", "--store", str(tmp_path / "s.json"))
        assert code == 1
        assert CONFIG_ENV_VAR in err


class TestLearn:
    def test_assignments_logged_as_json_lines(self, pos_setup, tmp_path, capsys):
        _, store = pos_setup
        data = write_records(tmp_path / "data.jsonl", cluster_rows())
        code, out, err = run(capsys, "learn", "--store", store, data)
        assert code == 0
        entries = [json.loads(line) for line in out]
        assert len(entries) == 6
        assert entries[0]["item_id"] == "i00"
        assert entries[0]["created"] is True
        assert {e["concept_id"] for e in entries} == {"c1", "c2"}
        assert "2 new concept(s)" in err

    def test_empty_input_leaves_store_unchanged(self, pos_setup, tmp_path, capsys):
        _, store = pos_setup
        before = open(store, "rb").read()
        empty = tmp_path / "empty.jsonl"
        empty.write_text("\n\n")
        code, out, err = run(capsys, "learn", "--store", store, str(empty))
        assert code == 0
        assert out == []
        assert "store unchanged" in err
        assert open(store, "rb").read() == before

    def test_malformed_input_fails_before_writing(self, pos_setup, tmp_path, capsys):
        _, store = pos_setup
        before = open(store, "rb").read()
        bad = tmp_path / "bad.jsonl"
        bad.write_text('{"item_id": "a"}\n')
        code, out, err = run(capsys, "learn", "--store", store, str(bad))
        assert code == 1
        assert out == []
        assert "error:" in err
        assert open(store, "rb").read() == before

    def test_reruns_are_byte_identical(self, tmp_path, capsys):
        cfg = write_json(tmp_path / "space.json", POS_CONFIG)
        data = write_records(tmp_path / "data.jsonl", cluster_rows())
        stores = []
        for name in ("a.json", "b.json"):
            store = str(tmp_path / name)
            assert run(capsys, "init", "--config", cfg, "--store", store)[0] == 0
            assert run(capsys, "learn", "--store", store, data)[0] == 0
            stores.append(open(store, "rb").read())
        assert stores[0] == stores[1]

    def test_shuffled_order_is_seed_deterministic(self, tmp_path, capsys):
        cfg = write_json(tmp_path / "space.json", POS_CONFIG)
        data = write_records(tmp_path / "data.jsonl", cluster_rows())
        outputs = []
        for name in ("a.json", "b.json"):
            store = str(tmp_path / name)
            assert run(capsys, "init", "--config", cfg, "--store", store)[0] == 0
            code, out, _ = run(
                capsys, "learn", "--store", store, data, "--order", "shuffled", "--seed", "7"
            )
            assert code == 0
            outputs.append((out, open(store, "rb").read()))
        assert outputs[0] == outputs[1]

    def test_threshold_flag_overrides_stored_default(self, pos_setup, tmp_path, capsys):
        _, store = pos_setup
        data = write_records(tmp_path / "data.jsonl", cluster_rows())
        code, out, _ = run(capsys, "learn", "--store", store, data, "--theta", "1e-9")
        assert code == 0
        entries = [json.loads(line) for line in out]
        assert {e["concept_id"] for e in entries} == {"c1"}


class TestClassify:
    @pytest.fixture
    def trained(self, pos_setup, tmp_path, capsys):
        _, store = pos_setup
        data = write_records(tmp_path / "data.jsonl", cluster_rows())
        assert run(capsys, "learn", "--store", store, data)[0] == 0
        return store

    def test_ranks_every_item_in_file(self, trained, tmp_path, capsys):
        query = write_records(
            tmp_path / "query.jsonl",
            [{"item_id": "q1", "domain_id": "pos", "vector": [0.2, 0.1]}],
        )
        code, out, _ = run(capsys, "classify", "--store", trained, query)
        assert code == 0
        doc = json.loads(out[0])
        assert doc["item_id"] == "q1"
        assert doc["ranked"][0]["concept_id"] == "c1"
        assert doc["ranked"][0]["strict"] is False
        assert len(doc["ranked"]) == 2

    def test_top_limits_report(self, trained, tmp_path, capsys):
        query = write_records(
            tmp_path / "query.jsonl",
            [{"item_id": "q1", "domain_id": "pos", "vector": [0.9, 0.9]}],
        )
        code, out, _ = run(capsys, "classify", "--store", trained, query, "--top", "1")
        doc = json.loads(out[0])
        assert code == 0
        assert [r["concept_id"] for r in doc["ranked"]] == ["c2"]

    def test_color_flag_classifies_one_color(self, tmp_path, capsys):
        cfg = write_json(tmp_path / "space.json", COLOR_CONFIG)
        store = str(tmp_path / "store.json")
        assert run(capsys, "init", "--config", cfg, "--store", store)[0] == 0
        rows = [
            {"item_id": "red", "domain_id": "color", "vector": [0.0, 1.0, 1.0]},
            {"item_id": "yellow", "domain_id": "color", "vector": [1.0 / 6.0, 1.0, 1.0]},
        ]
        data = write_records(tmp_path / "data.jsonl", rows)
        code, out, _ = run(capsys, "learn", "--store", store, data)
        assert code == 0
        red_concept = json.loads(out[0])["concept_id"]
        code, out, _ = run(capsys, "classify", "--store", store, "--color", "255,0,0")
        assert code == 0
        doc = json.loads(out[0])
        assert doc["ranked"][0]["concept_id"] == red_concept
        assert doc["ranked"][0]["strict"] is True

    def test_empty_store_reports_and_exits_zero(self, pos_setup, tmp_path, capsys):
        _, store = pos_setup
        query = write_records(
            tmp_path / "query.jsonl",
            [{"item_id": "q1", "domain_id": "pos", "vector": [0.5, 0.5]}],
        )
        code, out, err = run(capsys, "classify", "--store", store, query)
        assert code == 0
        assert out == []
        assert "no concepts" in err

    def test_file_and_color_together_rejected(self, trained, tmp_path, capsys):
        query = write_records(
            tmp_path / "query.jsonl",
            [{"item_id": "q1", "domain_id": "pos", "vector": [0.5, 0.5]}],
        )
        code, _, err = run(capsys, "classify", "--store", trained, query, "--color", "1,2,3")
        assert code == 1
        assert "error:" in err

    def test_nothing_to_classify_rejected(self, trained, capsys):
        code, _, err = run(capsys, "classify", "--store", trained)
        assert code == 1
        assert "error:" in err

    def test_bad_color_syntax_rejected(self, trained, capsys):
        code, _, err = run(capsys, "classify", "--store", trained, "--color", "255,0")
        assert code == 1
        assert "error:" in err


class TestInspect:
    @pytest.fixture
    def trained(self, pos_setup, tmp_path, capsys):
        _, store = pos_setup
        data = write_records(tmp_path / "data.jsonl", cluster_rows())
        assert run(capsys, "learn", "--store", store, data)[0] == 0
        return store

    def test_summary_lists_every_concept(self, trained, capsys):
        code, out, err = run(capsys, "inspect", "--store", trained)
        assert code == 0
        docs = [json.loads(line) for line in out]
        assert [d["id"] for d in docs] == ["c1", "c2"]
        assert all(d["domains"] == ["pos"] for d in docs)
        assert "2 concept(s)" in err

    def test_single_concept_shows_regions(self, trained, capsys):
        code, out, _ = run(capsys, "inspect", "--store", trained, "--concept", "c1")
        assert code == 0
        doc = json.loads(out[0])
        assert doc["id"] == "c1"
        assert doc["count"] == 3
        assert doc["regions"]["pos"]["kind"] == "ball"

    def test_unknown_concept_id_fails(self, trained, capsys):
        code, _, err = run(capsys, "inspect", "--store", trained, "--concept", "c99")
        assert code == 1
        assert "c99" in err

    def test_projection_to_missing_domain_is_null(self, trained, capsys):
        code, out, _ = run(
            capsys, "inspect", "--store", trained, "--concept", "c1", "--project", "sound"
        )
        assert code == 0
        assert json.loads(out[0])["region"] is None

    def test_projection_without_concept_fails(self, trained, capsys):
        code, _, err = run(capsys, "inspect", "--store", trained, "--project", "pos")
        assert code == 1
        assert "error:" in err

    def test_overlaps_empty_for_separated_concepts(self, trained, capsys):
        code, out, _ = run(capsys, "inspect", "--store", trained, "--overlaps")
        assert code == 0
        assert out == []

    def test_overlaps_reports_touching_pair(self, tmp_path, capsys):
        cfg = write_json(tmp_path / "space.json", POS_CONFIG)
        store = str(tmp_path / "store.json")
        assert run(capsys, "init", "--config", cfg, "--store", store)[0] == 0
        rows = [
            {"item_id": "a", "domain_id": "pos", "vector": [0.5, 0.5]},
            {"item_id": "b", "domain_id": "pos", "vector": [0.56, 0.5]},
        ]
        data = write_records(tmp_path / "data.jsonl", rows)
        assert run(capsys, "learn", "--store", store, data, "--theta", "0.999")[0] == 0
        code, out, _ = run(capsys, "inspect", "--store", store, "--overlaps")
        assert code == 0
        assert json.loads(out[0]) == {"a": "c1", "b": "c2", "domains": ["pos"]}


class TestEval:
    @pytest.fixture
    def line_file(self, tmp_path):
        rows = [
            {
                "item_id": f"i{k}",
                "domain_id": "z",
                "vector": [k / 8.0],
                "meta": {"size": float(k)},
            }
            for k in range(9)
        ]
        return write_records(tmp_path / "line.jsonl", rows)

    def test_smoothness_of_faithful_embedding(self, line_file, capsys):
        code, out, _ = run(capsys, "eval", line_file, "--smoothness")
        assert code == 0
        doc = json.loads(out[0])
        assert doc["metric"] == "smoothness"
        assert doc["value"] == pytest.approx(1.0)
        assert doc["records"] == 9

    def test_baseline_adds_shuffled_score(self, line_file, capsys):
        code, out, _ = run(capsys, "eval", line_file, "--smoothness", "--baseline")
        assert code == 0
        docs = [json.loads(line) for line in out]
        assert docs[1]["metric"] == "smoothness_shuffled_baseline"
        assert docs[1]["value"] < docs[0]["value"]

    def test_betweenness_of_faithful_embedding(self, line_file, capsys):
        code, out, _ = run(capsys, "eval", line_file, "--betweenness", "--pairs", "30")
        assert code == 0
        doc = json.loads(out[0])
        assert doc["metric"] == "betweenness"
        assert doc["fraction_satisfied"] == pytest.approx(1.0)
        assert doc["pairs_checked"] == 30

    def test_requires_a_metric_flag(self, line_file, capsys):
        code, _, err = run(capsys, "eval", line_file)
        assert code == 1
        assert "error:" in err

    def test_too_few_records_fails(self, tmp_path, capsys):
        rows = [
            {"item_id": "a", "domain_id": "z", "vector": [0.0], "meta": {"size": 0.0}},
            {"item_id": "b", "domain_id": "z", "vector": [1.0], "meta": {"size": 1.0}},
        ]
        path = write_records(tmp_path / "tiny.jsonl", rows)
        code, _, err = run(capsys, "eval", path, "--smoothness")
        assert code == 1
        assert "error:" in err

    def test_mixed_domains_need_domain_flag(self, tmp_path, capsys):
        rows = [
            {"item_id": f"i{k}", "domain_id": d, "vector": [float(k)], "meta": {"size": float(k)}}
            for k in range(4)
            for d in ("a", "b")
        ]
        path = write_records(tmp_path / "mixed.jsonl", rows)
        code, _, err = run(capsys, "eval", path, "--smoothness")
        assert code == 1
        assert "--domain" in err
        code, out, _ = run(capsys, "eval", path, "--smoothness", "--domain", "a")
        assert code == 0
        assert json.loads(out[0])["records"] == 4


class TestExitCodes:
    def test_missing_store_is_an_error(self, tmp_path, capsys):
        code, out, err = run(capsys, "inspect", "--store", str(tmp_path / "absent.json"))
        assert code == 1
        assert out == []
        assert "error:" in err

    def test_corrupt_store_is_an_error(self, tmp_path, capsys):
        store = tmp_path / "store.json"
        store.write_text("{not json")
        code, _, err = run(capsys, "inspect", "--store", str(store))
        assert code == 1
        assert "error:" in err
