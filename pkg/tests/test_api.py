"""HTTP API contract: endpoints, status codes, consistency with the library."""

from __future__ import annotations

import pytest
from fastapi.testclient import TestClient

from assistcast import pipeline
from assistcast.api import Snapshot, create_app


@pytest.fixture(scope="module")
def client(persisted_system, bundle, trained_models):
    roster = pipeline.load_roster(persisted_system)
    snapshot = Snapshot(bundle=bundle, models=trained_models, roster=roster)
    app = create_app(persisted_system, snapshot=snapshot)
    return TestClient(app)


def test_stations_listing(client):
    payload = client.get("/stations").json()
    assert payload["stations"] == ["BWK", "KGX"]


def test_forecast_endpoint_routes_and_tags(client):
    r = client.get("/forecast", params={
        "station": "KGX",
        "origin": "2025-01-06T00:00:00Z",
        "from": "2025-01-06T01:00:00Z",
        "to": "2025-01-08T23:00:00Z",
    })
    assert r.status_code == 200
    body = r.json()
    assert body["station"] == "KGX"
    assert len(body["rows"]) == 71
    assert {row["bucket"] for row in body["rows"]} <= {"VeryShort", "Short"}
    assert all(row["yhat"] >= 0 for row in body["rows"])


def test_unknown_station_is_404(client):
    r = client.get("/forecast", params={
        "station": "ZZZ", "origin": "2025-01-06T00:00:00Z",
        "from": "2025-01-07T00:00:00Z", "to": "2025-01-08T00:00:00Z",
    })
    assert r.status_code == 404


def test_untrained_station_is_409(persisted_system, bundle, trained_models):
    roster = pipeline.load_roster(persisted_system)
    partial = {k: v for k, v in trained_models.items() if k != "BWK"}
    app = create_app(persisted_system, snapshot=Snapshot(bundle, partial, roster))
    local = TestClient(app)
    r = local.get("/heatmap", params={"station": "BWK"})
    assert r.status_code == 409


def test_bad_span_is_422(client):
    r = client.get("/forecast", params={
        "station": "KGX", "origin": "2025-01-06T00:00:00Z",
        "from": "2025-01-01T00:00:00Z", "to": "2025-01-02T00:00:00Z",
    })
    assert r.status_code == 422


def test_heatmap_matches_cli_single_source(client, persisted_system, bundle, trained_models):
    roster = pipeline.load_roster(persisted_system)
    expected = pipeline.heatmap_for_station(
        persisted_system, bundle, trained_models["KGX"], roster, "KGX", days=6
    )
    r = client.get("/heatmap", params={"station": "KGX", "days": 6})
    assert r.status_code == 200
    body = r.json()
    assert len(body["cells"]) == len(expected.cells)
    for cell, row in zip(body["cells"], expected.cells.itertuples()):
        assert cell["rag"] == row.rag
        assert cell["yhat"] == pytest.approx(row.yhat)
        assert cell["c_total"] == pytest.approx(row.c_total)


def test_whatif_empty_delta_equals_heatmap(client):
    base = client.get("/heatmap", params={"station": "KGX", "days": 4}).json()
    r = client.post("/whatif", json={"station": "KGX", "days": 4, "deltas": []})
    assert r.status_code == 200
    body = r.json()
    assert body["changed"] == 0
    assert body["diff"] == []
    assert body["heatmap"] == base


def test_whatif_applies_delta_and_reports_diff(client):
    base = client.get("/heatmap", params={"station": "KGX", "days": 4}).json()
    stressed = [c for c in base["cells"] if c["rag"] in ("AMBER", "RED")]
    target = stressed[0] if stressed else base["cells"][0]
    r = client.post("/whatif", json={
        "station": "KGX", "days": 4,
        "deltas": [{"hour": target["hour"], "role": "PSA", "change": 5}],
    })
    assert r.status_code == 200
    body = r.json()
    cells = {c["hour"]: c for c in body["heatmap"]["cells"]}
    assert cells[target["hour"]]["c_p"] == pytest.approx(target["c_p"] + 5 * 3.6)
    if stressed:
        assert body["changed"] >= 1
        assert any(d["hour"] == target["hour"] for d in body["diff"])


def test_whatif_unknown_role_is_422(client):
    r = client.post("/whatif", json={
        "station": "KGX", "deltas": [{"hour": "2025-01-07T09:00:00", "role": "NOPE", "change": 1}],
    })
    assert r.status_code == 422


def test_whatif_negative_headcount_is_422(client):
    base = client.get("/heatmap", params={"station": "KGX", "days": 4}).json()
    hour = base["cells"][0]["hour"]
    r = client.post("/whatif", json={
        "station": "KGX", "days": 4,
        "deltas": [{"hour": hour, "role": "PSA", "change": -99}],
    })
    assert r.status_code == 422


def test_whatif_malformed_body_is_422(client):
    r = client.post("/whatif", json={"station": "KGX", "deltas": [{"hour": 5}]})
    assert r.status_code == 422


def test_components_sum_to_forecast_for_additive_models(client):
    origin = "2025-01-06T00:00:00Z"
    span = {"from": "2025-01-07T00:00:00Z", "to": "2025-01-07T23:00:00Z"}
    forecast = client.get("/forecast", params={
        "station": "KGX", "origin": origin, **span,
    }).json()
    bucket = forecast["rows"][0]["bucket"]
    rows = [r for r in forecast["rows"] if r["bucket"] == bucket]

    components = client.get("/components", params={
        "station": "KGX", "bucket": bucket, "origin": origin, **span,
    }).json()
    assert components["mode"] == "ADDITIVE"
    comp_by_hour = {r["hour_start"]: r for r in components["rows"]}
    for row in rows:
        comp = comp_by_hour[row["hour_start"]]
        total = sum(comp[k] for k in ("trend", "daily", "weekly", "yearly", "holidays", "regressors"))
        assert total == pytest.approx(comp["yhat_raw"], abs=1e-9)
        assert row["yhat"] == pytest.approx(comp["yhat"], abs=1e-12)


def test_diagnostics_endpoint(client):
    r = client.get("/diagnostics", params={"station": "KGX", "bucket": "MediumII"})
    assert r.status_code == 200
    body = r.json()
    assert body["station"] == "KGX"
    assert len(body["residuals"]) == len(body["hours"])
    assert sum(body["hist_counts"]) == len(body["residuals"])
    r404 = client.get("/diagnostics", params={"station": "KGX", "bucket": "Nope"})
    assert r404.status_code == 404


def test_reads_are_deterministic(client):
    params = {"station": "KGX", "days": 3}
    a = client.get("/heatmap", params=params).json()
    b = client.get("/heatmap", params=params).json()
    assert a == b
