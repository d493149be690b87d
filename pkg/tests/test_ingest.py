import logging
from datetime import date
from decimal import Decimal

import pytest

from leaksim.ingest import (
    Facility,
    parse_equipment,
    parse_facilities,
    parse_fixture,
    parse_grid_mix,
    parse_groups,
    parse_hashrate_snapshot,
    parse_leaf_weights,
    parse_network_params,
    parse_regions,
    load_intensity_table,
)
from leaksim.model import DataError, IntensityTable, Source

from conftest import write_csv


class TestSnapshot:
    def test_well_formed(self, tmp_path):
        path = write_csv(tmp_path / "s.csv", "region_id,share\nCN,0.20\nKZ,0.10\nUS,0.40\nROW,0.30")
        shares = parse_hashrate_snapshot(path)
        assert shares == {"CN": 0.20, "KZ": 0.10, "US": 0.40, "ROW": 0.30}
        assert abs(sum(shares.values()) - 1.0) < 1e-12

    def test_sum_drift_error(self, tmp_path):
        path = write_csv(tmp_path / "s.csv", "region_id,share\nCN,0.20\nKZ,0.10\nUS,0.40\nROW,0.40")
        with pytest.raises(DataError, match="1.10"):
            parse_hashrate_snapshot(path)

    def test_negative_share(self, tmp_path):
        path = write_csv(tmp_path / "s.csv", "region_id,share\nCN,-0.05\nROW,1.05")
        with pytest.raises(DataError, match="negative"):
            parse_hashrate_snapshot(path)

    def test_duplicate_region(self, tmp_path):
        path = write_csv(tmp_path / "s.csv", "region_id,share\nCN,0.5\nCN,0.5")
        with pytest.raises(DataError, match="duplicate"):
            parse_hashrate_snapshot(path)

    def test_small_drift_renormalized_and_logged(self, tmp_path, caplog):
        path = write_csv(tmp_path / "s.csv", "region_id,share\nA,0.5000001\nB,0.5")
        with caplog.at_level(logging.INFO, logger="leaksim.ingest"):
            shares = parse_hashrate_snapshot(path)
        assert sum(shares.values()) == pytest.approx(1.0, abs=1e-12)
        assert any("renormalized" in r.message for r in caplog.records)

    def test_missing_column(self, tmp_path):
        path = write_csv(tmp_path / "s.csv", "region,share\nCN,1.0")
        with pytest.raises(DataError, match="missing column"):
            parse_hashrate_snapshot(path)


class TestGridMix:
    def test_country_mix(self, tmp_path):
        path = write_csv(
            tmp_path / "m.csv",
            "region_id,hydro,wind\nNO,0.92,0.08",
        )
        mixes, direct = parse_grid_mix(path, "country")
        assert direct == []
        assert mixes[0].region_id == "NO"
        assert mixes[0].share(Source.HYDRO) == 0.92
        assert mixes[0].share(Source.COAL) == 0.0

    def test_sum_drift(self, tmp_path):
        path = write_csv(tmp_path / "m.csv", "region_id,coal,gas\nXX,0.7,0.4")
        with pytest.raises(DataError, match="sum"):
            parse_grid_mix(path, "country")

    def test_cn_direct_intensity(self, tmp_path):
        path = write_csv(
            tmp_path / "m.csv",
            "region_id,intensity_pog,intensity_lca\nCN-Xinjiang,748,762\nCN-Sichuan,152,",
        )
        mixes, direct = parse_grid_mix(path, "cn_province")
        assert mixes == []
        assert direct[0].intensity_pog == 748 and direct[0].intensity_lca == 762
        assert direct[1].intensity_lca is None

    def test_direct_intensity_wrong_schema(self, tmp_path):
        path = write_csv(tmp_path / "m.csv", "region_id,intensity_pog\nNO,20")
        with pytest.raises(DataError, match="cn_province"):
            parse_grid_mix(path, "country")

    def test_unknown_source_column(self, tmp_path):
        path = write_csv(tmp_path / "m.csv", "region_id,coal,geothermal\nXX,0.5,0.5")
        with pytest.raises(DataError, match="unknown source"):
            parse_grid_mix(path, "country")

    def test_unknown_schema(self, tmp_path):
        path = write_csv(tmp_path / "m.csv", "region_id,coal\nXX,1.0")
        with pytest.raises(DataError, match="schema"):
            parse_grid_mix(path, "planet")


class TestFacilities:
    HEADER = "facility_id,region_id,hashrate_ths,power_mw,source,counterfactual,start_date"

    def test_hashrate_capacity(self, tmp_path):
        path = write_csv(tmp_path / "f.csv", f"{self.HEADER}\nf1,PY,5e5,,hydro,,2023-05-01")
        (f,) = parse_facilities(path)
        assert f.hashrate_ths == 5e5 and f.power_mw is None
        assert f.source is Source.HYDRO
        assert f.start_date == date(2023, 5, 1)

    def test_power_capacity_methane(self, tmp_path):
        path = write_csv(tmp_path / "f.csv", f"{self.HEADER}\nf2,US-TX,,30,methane,flared,")
        (f,) = parse_facilities(path)
        assert f.power_mw == 30 and f.hashrate_ths is None
        assert f.counterfactual.value == "flared"

    def test_ambiguous_capacity(self, tmp_path):
        path = write_csv(tmp_path / "f.csv", f"{self.HEADER}\nf3,NO,1e5,10,hydro,,")
        with pytest.raises(DataError, match="exactly one"):
            parse_facilities(path)

    def test_no_capacity(self, tmp_path):
        path = write_csv(tmp_path / "f.csv", f"{self.HEADER}\nf4,NO,,,hydro,,")
        with pytest.raises(DataError, match="exactly one"):
            parse_facilities(path)

    def test_methane_needs_counterfactual(self, tmp_path):
        path = write_csv(tmp_path / "f.csv", f"{self.HEADER}\nf5,US-TX,,30,methane,,")
        with pytest.raises(DataError, match="counterfactual"):
            parse_facilities(path)

    def test_nonpositive_capacity(self):
        with pytest.raises(DataError, match="positive"):
            Facility(facility_id="f", region_id="X", source=Source.HYDRO, hashrate_ths=0.0)


class TestParamsAndEquipment:
    def test_parse_params_with_defaults(self, tmp_path):
        path = tmp_path / "p.txt"
        path.write_text(
            "# comment\n"
            "hashrate_ths = 6e8\n"
            "subsidy_btc_per_block = 3.125\n"
            "fees_btc_per_block = 0.2\n"
            "btc_price_usd = 60000\n"
            "electricity_price_usd_per_kwh = 0.05\n"
            "pue = 1.10\n"
        )
        params = parse_network_params(path)
        assert params.blocks_per_day == 144
        assert params.profitability_threshold == 1.0
        assert params.pue == 1.10

    def test_missing_param(self, tmp_path):
        path = tmp_path / "p.txt"
        path.write_text("hashrate_ths = 6e8\n")
        with pytest.raises(DataError, match="missing parameter"):
            parse_network_params(path)

    def test_unknown_param(self, tmp_path):
        path = tmp_path / "p.txt"
        path.write_text("difficulty = 1\n")
        with pytest.raises(DataError, match="unknown parameter"):
            parse_network_params(path)

    def test_equipment(self, tmp_path):
        path = write_csv(tmp_path / "e.csv", "model,efficiency_j_per_th\nE1,30\nE2,50")
        eq = parse_equipment(path)
        assert [e.efficiency_j_per_th for e in eq] == [30, 50]

    def test_equipment_positive(self, tmp_path):
        path = write_csv(tmp_path / "e.csv", "model,efficiency_j_per_th\nE1,0")
        with pytest.raises(DataError, match="> 0"):
            parse_equipment(path)


def test_parse_regions_and_leaf_weights(tmp_path):
    regions = parse_regions(
        write_csv(
            tmp_path / "r.csv",
            "id,name,level,parent,iso_code\nUS,United States,country,,US\nUS-TX,Texas,us_state,US,US-TX",
        )
    )
    assert regions[1].parent == "US"
    weights = parse_leaf_weights(
        write_csv(tmp_path / "w.csv", "country_id,leaf_id,weight\nUS,US-TX,0.6\nUS,US-NY,0.4")
    )
    assert weights == {"US": {"US-TX": 0.6, "US-NY": 0.4}}


def test_parse_groups(tmp_path):
    groups = parse_groups(
        write_csv(tmp_path / "g.csv", "group_id,member_region_id\nEU,FR\nEU,DE\nG2,FR")
    )
    assert groups["EU"] == frozenset({"FR", "DE"})
    assert groups["G2"] == frozenset({"FR"})


class TestFixtures:
    def test_bundled_table_i(self, data_dir):
        fixture = parse_fixture(data_dir / "fixtures" / "table_I.csv", "I")
        assert len(fixture.rows) == 120
        canada = next(r for r in fixture.rows if r.labels == ("Canada",))
        assert canada.values() == (
            Decimal("2389.66"),
            Decimal("2494.93"),
            Decimal("1194.83"),
            Decimal("1247.47"),
        )
        assert any(r.labels == ("European Union",) for r in fixture.rows)

    def test_bundled_table_iii_sichuan(self, data_dir):
        fixture = parse_fixture(data_dir / "fixtures" / "table_III.csv", "III")
        sichuan = next(r for r in fixture.rows if r.labels == ("Sichuan",))
        assert sichuan.full_lca == Decimal("1786.95")
        assert sichuan.limited_pog == Decimal("848.14")

    def test_bundled_table_iv_labels(self, data_dir):
        fixture = parse_fixture(data_dir / "fixtures" / "table_IV.csv", "IV")
        assert fixture.label_columns == ("Country", "State")
        assert any(r.labels == ("Kazakhstan", "") for r in fixture.rows)
        assert any(r.labels == ("United States", "Georgia") for r in fixture.rows)

    def test_non_numeric_cell(self, tmp_path):
        path = write_csv(
            tmp_path / "t.csv",
            "Country/State,Full_LCA,Full_POG,Limited_LCA,Limited_POG\nCanada,abc,1.00,0.50,0.50",
        )
        with pytest.raises(DataError, match="not a number"):
            parse_fixture(path, "I")

    def test_missing_column(self, tmp_path):
        path = write_csv(tmp_path / "t.csv", "Country/State,Full_LCA\nCanada,1.00")
        with pytest.raises(DataError, match="missing column"):
            parse_fixture(path, "I")

    def test_two_decimals_enforced(self, tmp_path):
        path = write_csv(
            tmp_path / "t.csv",
            "Country/State,Full_LCA,Full_POG,Limited_LCA,Limited_POG\nCanada,1.5,1.00,0.50,0.50",
        )
        with pytest.raises(DataError, match="two decimal"):
            parse_fixture(path, "I")

    def test_unknown_table_id(self, tmp_path):
        with pytest.raises(DataError, match="unknown fixture table"):
            parse_fixture(tmp_path / "t.csv", "V")


def test_bundled_intensity_table_matches_default(data_dir):
    loaded = load_intensity_table(data_dir / "intensity_table.csv")
    assert loaded == IntensityTable.default()
