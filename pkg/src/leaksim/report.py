"""Result emission: tables, map-join data, and fixture consistency checks.

Numbers print with two decimals, round-half-away-from-zero, no thousands
grouping, matching the convention of the reference tables. Output is
deterministic byte-for-byte for identical inputs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from decimal import Decimal, ROUND_HALF_UP
from typing import Iterable, Mapping, Sequence

from .ingest import FIXTURE_VALUE_COLUMNS, FixtureTable
from .model import DataError, RegionRegistry
from .scenario import SweepRow

SWEEP_COLUMNS = ("Country/State", "Full_LCA", "Full_POG", "Limited_LCA", "Limited_POG")

#: Deltas at most this far from zero print as 0.00 and classify as neutral.
NEUTRAL_BAND_KT = 0.005

HALF_SCALING_TOL = Decimal("0.01")


def format_2dec(value: float | Decimal) -> str:
    if not isinstance(value, Decimal):
        value = Decimal(repr(value))
    return str(value.quantize(Decimal("0.01"), rounding=ROUND_HALF_UP))


def emit_table(
    rows: Iterable[Mapping[str, object]],
    format: str = "csv",
    columns: Sequence[str] | None = None,
) -> bytes:
    """Serialize result rows as CSV or JSON bytes.

    Numeric cells are printed with two decimals; strings pass through. The
    column set comes from `columns` or the first row's key order.
    """
    rows = list(rows)
    if columns is None:
        columns = tuple(rows[0].keys()) if rows else ()

    def cell(value: object) -> str | float | None:
        if value is None:
            return "" if format == "csv" else None
        if isinstance(value, (int, float, Decimal)) and not isinstance(value, bool):
            return format_2dec(value)
        return str(value)

    if format == "csv":
        lines = [",".join(columns)]
        for row in rows:
            lines.append(",".join(str(cell(row.get(c))) for c in columns))
        return ("\n".join(lines) + "\n").encode("utf-8")
    if format == "json":
        payload = []
        for row in rows:
            obj = {}
            for c in columns:
                v = cell(row.get(c))
                obj[c] = float(v) if isinstance(v, str) and _is_number(v) else v
            payload.append(obj)
        return (json.dumps(payload, indent=2) + "\n").encode("utf-8")
    raise DataError(f"unknown table format {format!r}")


def _is_number(text: str) -> bool:
    try:
        float(text)
        return True
    except ValueError:
        return False


def sweep_rows_as_mappings(rows: Iterable[SweepRow]) -> list[dict[str, object]]:
    return [
        {
            "Country/State": r.label,
            "Full_LCA": r.full_lca,
            "Full_POG": r.full_pog,
            "Limited_LCA": r.limited_lca,
            "Limited_POG": r.limited_pog,
        }
        for r in rows
    ]


def fixture_as_mappings(fixture: FixtureTable) -> tuple[tuple[str, ...], list[dict[str, object]]]:
    columns = fixture.label_columns + FIXTURE_VALUE_COLUMNS
    rows = []
    for row in fixture.rows:
        mapping: dict[str, object] = dict(zip(fixture.label_columns, row.labels))
        mapping.update(zip(FIXTURE_VALUE_COLUMNS, row.values()))
        rows.append(mapping)
    return columns, rows


def classify_delta(delta_kt: float) -> str:
    if abs(delta_kt) <= NEUTRAL_BAND_KT:
        return "neutral"
    return "backfire" if delta_kt > 0 else "effective"


def emit_map_data(
    per_region_delta: Mapping[str, float],
    baseline_kt: float,
    registry: RegionRegistry,
) -> list[dict[str, object]]:
    """Choropleth join records: region, ISO code where known, delta, percent
    of the global baseline, and the red/green/grey class."""
    records = []
    for region_id in sorted(per_region_delta):
        delta = per_region_delta[region_id]
        region = registry.get(region_id)
        records.append(
            {
                "region_id": region_id,
                "iso_code": region.iso_code if region else None,
                "delta_kt": delta,
                "percent": 100.0 * delta / baseline_kt if baseline_kt > 0 else None,
                "class": classify_delta(delta),
            }
        )
    return records


def percent_of_global(delta_kt: float, baseline_kt: float) -> float:
    if baseline_kt <= 0:
        raise DataError(f"baseline must be positive, got {baseline_kt!r}")
    return 100.0 * delta_kt / baseline_kt


@dataclass(frozen=True)
class FixtureFinding:
    table_id: str
    row_label: str
    message: str


def check_fixtures(fixtures: Iterable[FixtureTable]) -> list[FixtureFinding]:
    """Consistency checks over the transcribed reference tables.

    Every limited-effectiveness column must equal half the full column
    within print rounding (0.01); the one-off table must be non-negative.
    """
    findings = []
    for fixture in fixtures:
        for row in fixture.rows:
            label = " / ".join(x for x in row.labels if x)
            pairs = (("LCA", row.full_lca, row.limited_lca), ("POG", row.full_pog, row.limited_pog))
            for basis, full, limited in pairs:
                residual = abs(limited - full / 2)
                if residual > HALF_SCALING_TOL:
                    findings.append(
                        FixtureFinding(
                            fixture.table_id,
                            label,
                            f"{basis}: limited {limited} vs full/2 {full / 2} (off by {residual})",
                        )
                    )
            if fixture.table_id == "IV":
                for column, value in zip(FIXTURE_VALUE_COLUMNS, row.values()):
                    if value < 0:
                        findings.append(
                            FixtureFinding(fixture.table_id, label, f"{column}: negative one-off {value}")
                        )
    return findings
