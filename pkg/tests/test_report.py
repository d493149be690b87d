import json
from decimal import Decimal

import pytest

from leaksim.ingest import parse_fixture, FixtureRow, FixtureTable
from leaksim.model import DataError, build_registry
from leaksim.report import (
    check_fixtures,
    classify_delta,
    emit_map_data,
    emit_table,
    fixture_as_mappings,
    format_2dec,
    percent_of_global,
)


class TestFormat2Dec:
    def test_plain(self):
        assert format_2dec(1194.83) == "1194.83"
        assert format_2dec(0) == "0.00"

    def test_round_half_away_from_zero(self):
        assert format_2dec(Decimal("0.125")) == "0.13"
        assert format_2dec(Decimal("-0.125")) == "-0.13"
        assert format_2dec(Decimal("2.675")) == "2.68"

    def test_no_thousands_grouping(self):
        assert format_2dec(2494.93) == "2494.93"
        assert "," not in format_2dec(1234567.891)


class TestEmitTable:
    ROWS = [
        {"Region": "A", "Delta": 35.0},
        {"Region": "B", "Delta": -6.42857},
        {"Region": "C", "Delta": -16.25},
    ]

    def test_csv(self):
        out = emit_table(self.ROWS, "csv").decode()
        lines = out.strip().split("\n")
        assert lines[0] == "Region,Delta"
        assert lines[1] == "A,35.00"
        assert lines[2] == "B,-6.43"
        assert len(lines) == 4

    def test_empty_rows_header_only(self):
        out = emit_table([], "csv", columns=("Region", "Delta")).decode()
        assert out == "Region,Delta\n"

    def test_json(self):
        payload = json.loads(emit_table(self.ROWS, "json"))
        assert payload[0] == {"Region": "A", "Delta": 35.0}
        assert payload[1]["Delta"] == -6.43

    def test_deterministic(self):
        assert emit_table(self.ROWS, "csv") == emit_table(self.ROWS, "csv")

    def test_unknown_format(self):
        with pytest.raises(DataError):
            emit_table(self.ROWS, "xml")


class TestMapData:
    def registry(self):
        return build_registry(
            [
                {"id": "CA", "iso_code": "CA"},
                {"id": "KZ", "iso_code": "KZ"},
                {"id": "ROW", "level": "aggregate"},
            ]
        )

    def test_classes(self):
        assert classify_delta(2494.93) == "backfire"
        assert classify_delta(-3411.55) == "effective"
        assert classify_delta(0.0) == "neutral"
        assert classify_delta(0.005) == "neutral"
        assert classify_delta(-0.005) == "neutral"
        assert classify_delta(0.0051) == "backfire"

    def test_records(self):
        records = emit_map_data(
            {"CA": 2494.93, "KZ": -3411.55, "ROW": 10.0}, 44700.0, self.registry()
        )
        by_id = {r["region_id"]: r for r in records}
        assert by_id["CA"]["class"] == "backfire"
        assert by_id["CA"]["iso_code"] == "CA"
        assert by_id["KZ"]["class"] == "effective"
        assert by_id["ROW"]["iso_code"] is None
        assert by_id["CA"]["percent"] == pytest.approx(5.581, abs=1e-3)

    def test_permutation_stable(self):
        registry = self.registry()
        a = emit_map_data({"CA": 1.0, "KZ": -1.0}, 100.0, registry)
        b = emit_map_data({"KZ": -1.0, "CA": 1.0}, 100.0, registry)
        assert a == b


class TestPercentOfGlobal:
    def test_canada(self):
        assert percent_of_global(2494.93, 44700.0) == pytest.approx(5.58, abs=0.005)

    def test_kazakhstan(self):
        assert percent_of_global(-3411.55, 44700.0) == pytest.approx(-7.63, abs=0.005)

    def test_zero_delta(self):
        assert percent_of_global(0.0, 44700.0) == 0.0

    def test_nonpositive_baseline(self):
        with pytest.raises(DataError):
            percent_of_global(1.0, 0.0)


class TestCheckFixtures:
    def row(self, label, fl, fp, ll, lp):
        return FixtureRow((label,), Decimal(fl), Decimal(fp), Decimal(ll), Decimal(lp))

    def test_bundled_tables_clean(self, data_dir):
        fixtures = [
            parse_fixture(data_dir / "fixtures" / f"table_{t}.csv", t)
            for t in ("I", "II", "III", "IV")
        ]
        assert check_fixtures(fixtures) == []

    def test_exact_half(self):
        table = FixtureTable("I", ("Country/State",), (self.row("Canada", "2389.66", "2494.93", "1194.83", "1247.47"),))
        assert check_fixtures([table]) == []

    def test_half_within_print_rounding(self):
        table = FixtureTable("III", ("Country/State",), (self.row("Sichuan", "1786.95", "1696.29", "893.48", "848.14"),))
        assert check_fixtures([table]) == []

    def test_violation_reported_with_row_identity(self):
        table = FixtureTable("I", ("Country/State",), (self.row("Synthetic", "10.00", "10.00", "6.00", "5.00"),))
        findings = check_fixtures([table])
        assert len(findings) == 1
        assert findings[0].row_label == "Synthetic"
        assert "LCA" in findings[0].message

    def test_table_iv_negative_flagged(self):
        row = FixtureRow(("X", "Y"), Decimal("-1.00"), Decimal("1.00"), Decimal("-0.50"), Decimal("0.50"))
        findings = check_fixtures([FixtureTable("IV", ("Country", "State"), (row,))])
        # the row half-scales fine, so only the two sign findings fire
        assert len(findings) == 2
        assert all("negative" in f.message for f in findings)


class TestFixtureRoundTrip:
    @pytest.mark.parametrize("table_id", ["I", "II", "III", "IV"])
    def test_emit_parse_identity(self, data_dir, table_id):
        path = data_dir / "fixtures" / f"table_{table_id}.csv"
        fixture = parse_fixture(path, table_id)
        columns, rows = fixture_as_mappings(fixture)
        assert emit_table(rows, "csv", columns) == path.read_bytes()
