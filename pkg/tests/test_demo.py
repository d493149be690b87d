"""The fixture-backed demo dataset: the world the UI ships with.

Its shares and intensities were fitted so that single-ban deltas reproduce
the bundled reference tables; these tests pin that contract.
"""

import pytest
from fastapi.testclient import TestClient

from leaksim.carbon import baseline_emissions
from leaksim.dataset import load_dataset
from leaksim.ingest import parse_fixture
from leaksim.model import Basis, validate_atlas
from leaksim.report import format_2dec
from leaksim.scenario import sweep_single_bans
from leaksim.server import create_app


@pytest.fixture(scope="module")
def demo(data_dir):
    return load_dataset(data_dir / "demo")


@pytest.fixture(scope="module")
def demo_client(demo):
    return TestClient(create_app(demo))


def test_demo_loads_clean(demo):
    assert demo.energy_twh == 148.12
    report = validate_atlas(demo.atlas, demo.registry)
    assert report.ok, [f.message for f in report]
    assert demo.atlas.total_share() == pytest.approx(1.0, abs=1e-9)


def test_demo_baseline_matches_published_scale(demo):
    ledger = baseline_emissions(demo.atlas, demo.energy_twh, Basis.POG, demo.carbon)
    # 148.12 TWh at 301.8 g/kWh network average
    assert ledger.total_kt == pytest.approx(148.12 * 301.8, rel=1e-9)


def test_demo_kz_headline_exact(demo_client):
    r = demo_client.post(
        "/api/scenario", json={"regions": ["KZ"], "effectiveness": 1, "basis": "pog"}
    )
    assert r.status_code == 200
    payload = r.json()
    assert format_2dec(payload["delta_kt"]) == "-3411.55"
    assert payload["percent"] == pytest.approx(-7.632, abs=2e-3)
    # banned region goes green, receiving regions go red
    classes = {m["region_id"]: m["class"] for m in payload["map"]}
    assert classes["KZ"] == "effective"
    gains = [m for m in payload["map"] if m["region_id"] != "KZ" and abs(m["delta_kt"]) > 0.005]
    assert gains and all(m["class"] == "backfire" for m in gains)


def test_demo_eu_coalition_row(demo_client):
    r = demo_client.post("/api/scenario", json={"group": "EU", "effectiveness": 1, "basis": "pog"})
    assert format_2dec(r.json()["delta_kt"]) == "522.78"
    r = demo_client.post("/api/scenario", json={"group": "EU", "effectiveness": 1, "basis": "lca"})
    assert format_2dec(r.json()["delta_kt"]) == "488.57"


def test_demo_aggregate_country_rows(demo_client):
    # banning the US or China bans all their leaves at once
    us = demo_client.post("/api/scenario", json={"regions": ["US"], "effectiveness": 1, "basis": "pog"})
    assert format_2dec(us.json()["delta_kt"]) == "286.63"
    cn = demo_client.post("/api/scenario", json={"regions": ["CN"], "effectiveness": 1, "basis": "lca"})
    assert format_2dec(cn.json()["delta_kt"]) == "-1894.57"


def test_demo_full_columns_reproduce_reference_tables(demo, data_dir):
    for level, table_id in (("country", "I"), ("us_state", "II"), ("cn_province", "III")):
        fixture = parse_fixture(data_dir / "fixtures" / f"table_{table_id}.csv", table_id)
        rows = sweep_single_bans(demo.atlas, demo.energy_twh, level, demo.carbon, demo.registry)
        by_label = {r.label: r for r in rows}
        if "EU" in by_label:
            by_label["European Union"] = by_label["EU"]
        for frow in fixture.rows:
            (label,) = frow.labels
            srow = by_label[label]
            assert format_2dec(srow.full_lca) == str(frow.full_lca), (table_id, label)
            assert format_2dec(srow.full_pog) == str(frow.full_pog), (table_id, label)
            # limited columns: engine halves exactly; the published tables
            # round full/2 to print precision
            assert abs(srow.limited_lca - float(frow.limited_lca)) <= 0.0051
            assert abs(srow.limited_pog - float(frow.limited_pog)) <= 0.0051


def test_demo_groups_endpoint_lists_eu(demo_client):
    groups = demo_client.get("/api/groups").json()
    eu = next(g for g in groups if g["id"] == "EU")
    assert len(eu["members"]) == 27
