from __future__ import annotations

import pytest
from fastapi.testclient import TestClient

from jtopics import pipeline
from jtopics.classifier import ReplayBackend
from jtopics.corpus import load_canonical_court_table, load_corpus
from jtopics.service import create_app
from jtopics.taxonomy import canonical_taxonomy_path
from tests.conftest import response_text, write_case_xml, write_fixture_file


@pytest.fixture()
def run_env(tmp_path, tax, cmap):
    """A stored 10-case run with repairs and a full sample, plus its client."""
    corpus_dir = tmp_path / "corpus"
    corpus_dir.mkdir()
    responses = {}
    for i in range(10):
        case_id = f"case_{i:02d}"
        write_case_xml(corpus_dir, case_id, hearing_date=f"20{10 + i}-05-01",
                       body=f"Case body {i} " + "detail " * 30)
        responses[case_id] = response_text("Contract (CTR)", None, f"reason {i}", 4)
    fixtures = write_fixture_file(tmp_path / "fx.tsv", responses)

    store_root = tmp_path / "runs"
    from jtopics.store import RunStore

    store = RunStore(store_root)
    cases, _ = load_corpus(corpus_dir, load_canonical_court_table())
    run_id = pipeline.classify_run(
        store, tax, str(canonical_taxonomy_path()), cases, str(corpus_dir),
        ReplayBackend.from_file(fixtures), run_id="r1", started_at="2026-01-01T00:00:00+00:00",
    )
    pipeline.repair_run(store, tax, run_id, cmap)
    pipeline.sample_run(store, run_id, 0.95, 0.05, seed=1)
    app = create_app(store_root, tax, excerpt_chars=50)
    return TestClient(app), store


def test_list_runs(run_env):
    client, _ = run_env
    runs = client.get("/api/runs").json()
    assert len(runs) == 1
    assert runs[0]["run_id"] == "r1"
    assert runs[0]["cases"] == 10
    assert runs[0]["sampled"] == 10


def test_taxonomy_endpoint(run_env, tax):
    client, _ = run_env
    payload = client.get("/api/taxonomy").json()
    assert len(payload["areas"]) == len(tax)
    assert len(payload["groups"]) == 6
    assert payload["areas"][0]["abbreviation"] == "PUB"


def test_next_task_order_and_excerpt(run_env):
    client, _ = run_env
    task = client.get("/api/runs/r1/tasks/next?reviewer=alice").json()
    assert task["case_id"] == "case_00"
    assert len(task["excerpt"]) == 50
    assert task["assigned_primary"] == "Contract (CTR)"
    assert task["repair_status"] == "Exact"
    assert task["remaining"] == 10


def test_same_task_until_verdict_arrives(run_env):
    client, _ = run_env
    first = client.get("/api/runs/r1/tasks/next?reviewer=alice").json()
    second = client.get("/api/runs/r1/tasks/next?reviewer=bob").json()
    assert first["case_id"] == second["case_id"]
    client.post(
        "/api/runs/r1/verdicts",
        json={"case_id": first["case_id"], "verdict": "correct", "reviewer": "alice"},
    )
    third = client.get("/api/runs/r1/tasks/next?reviewer=bob").json()
    assert third["case_id"] == "case_01"


def test_submit_all_verdict_categories(run_env):
    client, _ = run_env
    payloads = [
        ("case_00", "correct", None),
        ("case_01", "minor_naming", None),
        ("case_02", "primary_secondary_swap", "Contract (CTR)"),
        ("case_03", "hallucinated", "Litigation – general (LIG)"),
        ("case_04", "incorrect", "Banking (BAN)"),
    ]
    for case_id, verdict, label in payloads:
        body = {"case_id": case_id, "verdict": verdict, "reviewer": "alice"}
        if label:
            body["corrected_label"] = label
        response = client.post("/api/runs/r1/verdicts", json=body)
        assert response.status_code == 201, response.text
    metrics = client.get("/api/runs/r1/metrics").json()
    assert metrics["total"] == 5
    assert metrics["counts"]["hallucinated"] == 1
    assert metrics["initial_accuracy"] == 20.0
    assert metrics["adjusted_accuracy"] == 40.0


def test_verdict_validation_errors(run_env):
    client, _ = run_env
    bad_verdict = client.post(
        "/api/runs/r1/verdicts",
        json={"case_id": "case_00", "verdict": "meh", "reviewer": "a"},
    )
    assert bad_verdict.status_code == 400
    bad_label = client.post(
        "/api/runs/r1/verdicts",
        json={"case_id": "case_00", "verdict": "incorrect",
              "corrected_label": "Nonsense (XXX)", "reviewer": "a"},
    )
    assert bad_label.status_code == 400
    missing_label = client.post(
        "/api/runs/r1/verdicts",
        json={"case_id": "case_00", "verdict": "hallucinated", "reviewer": "a"},
    )
    assert missing_label.status_code == 400
    not_sampled = client.post(
        "/api/runs/r1/verdicts",
        json={"case_id": "missing", "verdict": "correct", "reviewer": "a"},
    )
    assert not_sampled.status_code == 404


def test_duplicate_and_conflicting_verdicts(run_env):
    client, _ = run_env
    body = {"case_id": "case_05", "verdict": "correct", "reviewer": "alice"}
    assert client.post("/api/runs/r1/verdicts", json=body).status_code == 201
    assert client.post("/api/runs/r1/verdicts", json=body).status_code == 200
    conflict = dict(body, verdict="incorrect", corrected_label="Banking (BAN)")
    response = client.post("/api/runs/r1/verdicts", json=conflict)
    assert response.status_code == 409
    existing = response.json()["detail"]["existing"]
    assert existing["verdict"] == "correct"
    assert existing["case_id"] == "case_05"


def test_metrics_without_verdicts_flagged(run_env):
    client, _ = run_env
    metrics = client.get("/api/runs/r1/metrics").json()
    assert metrics["total"] == 0
    assert metrics["note"] == "no verdicts"
    assert metrics["initial_accuracy"] is None


def test_metrics_equals_accuracy_of_stored_verdicts(run_env):
    client, store = run_env
    for i in range(4):
        client.post(
            "/api/runs/r1/verdicts",
            json={"case_id": f"case_{i:02d}", "verdict": "correct" if i else "incorrect",
                  "corrected_label": None if i else "Banking (BAN)", "reviewer": "a"},
        )
        report = pipeline.metrics_for_run(store, "r1")
        payload = client.get("/api/runs/r1/metrics").json()
        assert payload["total"] == report.total
        assert payload["initial_accuracy"] == report.initial_accuracy


def test_aggregates_equal_direct_module_output(run_env, tax):
    client, store = run_env
    via_api = client.get("/api/runs/r1/aggregates").json()
    direct = pipeline.aggregates_for_run(store, tax, "r1").to_json_obj()
    assert via_api == direct
    assert via_api["total"] == 10


def test_aggregates_reflect_verdict_corrections(run_env, tax):
    client, store = run_env
    client.post(
        "/api/runs/r1/verdicts",
        json={"case_id": "case_00", "verdict": "incorrect",
              "corrected_label": "Banking (BAN)", "reviewer": "a"},
    )
    payload = client.get("/api/runs/r1/aggregates").json()
    areas = {item["label"]: item["count"] for item in payload["by_area"]}
    assert areas["Banking (BAN)"] == 1
    assert areas["Contract (CTR)"] == 9


def test_get_case_full_text(run_env):
    client, _ = run_env
    case = client.get("/api/runs/r1/cases/case_03").json()
    assert case["case_id"] == "case_03"
    assert len(case["full_text"]) > 50
    assert client.get("/api/runs/r1/cases/nope").status_code == 404
    assert client.get("/api/runs/zzz/metrics").status_code == 404


def test_next_task_exhaustion_returns_204(run_env):
    client, _ = run_env
    for i in range(10):
        client.post(
            "/api/runs/r1/verdicts",
            json={"case_id": f"case_{i:02d}", "verdict": "correct", "reviewer": "a"},
        )
    assert client.get("/api/runs/r1/tasks/next?reviewer=a").status_code == 204


def test_metrics_over_golden_342_verdict_store(tmp_path, tax, cmap):
    corpus_dir = tmp_path / "corpus"
    corpus_dir.mkdir()
    responses = {}
    for i in range(342):
        case_id = f"case_{i:03d}"
        write_case_xml(corpus_dir, case_id)
        responses[case_id] = response_text("Contract (CTR)", None, "x", 5)
    fixtures = write_fixture_file(tmp_path / "fx.tsv", responses)
    from jtopics.store import RunStore

    store = RunStore(tmp_path / "runs")
    cases, _ = load_corpus(corpus_dir, load_canonical_court_table())
    pipeline.classify_run(store, tax, str(canonical_taxonomy_path()), cases, str(corpus_dir),
                          ReplayBackend.from_file(fixtures), run_id="golden",
                          started_at="2026-01-01T00:00:00+00:00")
    pipeline.repair_run(store, tax, "golden", cmap)
    # the golden fixture stands for a fully reviewed 342-case sample
    store.write_sample("golden", {"population": 3078, "sample_size": 342,
                                  "seed": 9, "case_ids": sorted(responses)})
    client = TestClient(create_app(tmp_path / "runs", tax))

    kinds = (
        [("correct", None)] * 289
        + [("minor_naming", None)] * 9
        + [("primary_secondary_swap", "Contract (CTR)")] * 26
        + [("hallucinated", "Litigation – general (LIG)")] * 4
        + [("incorrect", "Banking (BAN)")] * 14
    )
    for i, (verdict, label) in enumerate(kinds):
        body = {"case_id": f"case_{i:03d}", "verdict": verdict, "reviewer": "expert"}
        if label:
            body["corrected_label"] = label
        assert client.post("/api/runs/golden/verdicts", json=body).status_code == 201
    metrics = client.get("/api/runs/golden/metrics").json()
    assert metrics["total"] == 342
    assert metrics["initial_accuracy"] == 84.50
    assert metrics["adjusted_accuracy"] == 87.13
    assert metrics["counts"] == {
        "correct": 289,
        "minor_naming": 9,
        "primary_secondary_swap": 26,
        "hallucinated": 4,
        "incorrect": 14,
    }


def test_hallucinated_verdict_extends_correction_map(tmp_path, tax, cmap):
    corpus_dir = tmp_path / "corpus"
    corpus_dir.mkdir()
    write_case_xml(corpus_dir, "case_00", body="A novel dispute")
    fixtures = write_fixture_file(
        tmp_path / "fx.tsv",
        {"case_00": response_text("Space law (SPA)", None, "novel", 2)},
    )
    from jtopics.store import RunStore

    store = RunStore(tmp_path / "runs")
    cases, _ = load_corpus(corpus_dir, load_canonical_court_table())
    pipeline.classify_run(store, tax, str(canonical_taxonomy_path()), cases, str(corpus_dir),
                          ReplayBackend.from_file(fixtures), run_id="r1",
                          started_at="2026-01-01T00:00:00+00:00")
    pipeline.repair_run(store, tax, "r1", cmap)
    pipeline.sample_run(store, "r1", 0.95, 0.05, seed=1)
    client = TestClient(create_app(tmp_path / "runs", tax))
    response = client.post(
        "/api/runs/r1/verdicts",
        json={"case_id": "case_00", "verdict": "hallucinated",
              "corrected_label": "International (INT)", "reviewer": "alice"},
    )
    assert response.status_code == 201
    assert store.correction_map_versions("r1") == [1, 2]
    latest = store.latest_correction_map("r1")
    assert latest.lookup("Space law (SPA)").target_label == "International (INT)"
