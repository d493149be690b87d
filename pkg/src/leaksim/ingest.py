"""Parsers for every external dataset.

All inputs are CSV (UTF-8, header row, '.' decimal separator, no thousands
grouping) except the network parameter file, which is flat key-value text.
Parsers reject bad data instead of repairing it; the single exception is
hash-rate share renormalization within 1e-6, which is logged.
"""

from __future__ import annotations

import csv
import logging
from dataclasses import dataclass
from datetime import date
from decimal import Decimal, InvalidOperation
from pathlib import Path
from typing import Iterator

from .model import (
    Counterfactual,
    DataError,
    DirectIntensity,
    GRID_SOURCES,
    GridMix,
    IntensityTable,
    Level,
    Region,
    Source,
)
from .power import Equipment, NetworkParams

log = logging.getLogger(__name__)

SNAPSHOT_SUM_TOL = 1e-6

FIXTURE_VALUE_COLUMNS = ("Full_LCA", "Full_POG", "Limited_LCA", "Limited_POG")
FIXTURE_LABEL_COLUMNS = {
    "I": ("Country/State",),
    "II": ("Country/State",),
    "III": ("Country/State",),
    "IV": ("Country", "State"),
}


@dataclass(frozen=True)
class Facility:
    """One known mining operation, located and sourced by hand-collected data."""

    facility_id: str
    region_id: str
    source: Source
    hashrate_ths: float | None = None
    power_mw: float | None = None
    counterfactual: Counterfactual = Counterfactual.NONE
    start_date: date | None = None

    def __post_init__(self):
        if (self.hashrate_ths is None) == (self.power_mw is None):
            raise DataError(
                f"facility {self.facility_id!r} needs exactly one of hashrate_ths or power_mw"
            )
        capacity = self.hashrate_ths if self.hashrate_ths is not None else self.power_mw
        if not capacity > 0:
            raise DataError(f"facility {self.facility_id!r} capacity must be positive")
        if self.source is Source.METHANE and self.counterfactual is Counterfactual.NONE:
            raise DataError(f"methane facility {self.facility_id!r} requires a counterfactual")
        if self.source is not Source.METHANE and self.counterfactual is not Counterfactual.NONE:
            raise DataError(f"facility {self.facility_id!r}: counterfactual only applies to methane")


@dataclass(frozen=True)
class FixtureRow:
    labels: tuple[str, ...]
    full_lca: Decimal
    full_pog: Decimal
    limited_lca: Decimal
    limited_pog: Decimal

    def values(self) -> tuple[Decimal, Decimal, Decimal, Decimal]:
        return (self.full_lca, self.full_pog, self.limited_lca, self.limited_pog)


@dataclass(frozen=True)
class FixtureTable:
    """A transcribed reference table, values in thousand tonnes CO2eq."""

    table_id: str
    label_columns: tuple[str, ...]
    rows: tuple[FixtureRow, ...]


def _read_rows(path: str | Path, required: tuple[str, ...]) -> Iterator[dict[str, str]]:
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as f:
        reader = csv.DictReader(f)
        header = reader.fieldnames or []
        missing = [c for c in required if c not in header]
        if missing:
            raise DataError(f"{path.name}: missing column(s) {', '.join(missing)}")
        for i, row in enumerate(reader, start=2):
            yield {k: (v or "").strip() for k, v in row.items() if k is not None} | {"_line": str(i)}


def _parse_float(raw: str, context: str) -> float:
    try:
        return float(raw)
    except ValueError:
        raise DataError(f"{context}: {raw!r} is not a number") from None


def parse_regions(path: str | Path) -> list[Region]:
    regions = []
    for row in _read_rows(path, ("id", "name", "level", "parent", "iso_code")):
        if not row["id"]:
            raise DataError(f"regions line {row['_line']}: empty id")
        try:
            level = Level(row["level"]) if row["level"] else Level.COUNTRY
        except ValueError:
            raise DataError(f"regions line {row['_line']}: unknown level {row['level']!r}") from None
        regions.append(
            Region(
                id=row["id"],
                name=row["name"] or row["id"],
                level=level,
                parent=row["parent"] or None,
                iso_code=row["iso_code"] or None,
            )
        )
    return regions


def parse_hashrate_snapshot(path: str | Path) -> dict[str, float]:
    """Region -> share of global hash rate, renormalized to exactly 1.

    Drift beyond 1e-6, negative shares, and duplicate regions are errors.
    """
    shares: dict[str, float] = {}
    for row in _read_rows(path, ("region_id", "share")):
        region_id = row["region_id"]
        share = _parse_float(row["share"], f"snapshot line {row['_line']}")
        if share < 0:
            raise DataError(f"snapshot: negative share {share} for {region_id!r}")
        if region_id in shares:
            raise DataError(f"snapshot: duplicate region {region_id!r}")
        shares[region_id] = share
    total = sum(shares.values())
    if abs(total - 1.0) > SNAPSHOT_SUM_TOL:
        raise DataError(f"snapshot shares sum to {total:.8f}; drift exceeds {SNAPSHOT_SUM_TOL}")
    if total != 1.0:
        log.info("snapshot shares summed to %.9f; renormalized to 1", total)
        shares = {r: s / total for r, s in shares.items()}
    return shares


def parse_grid_mix(path: str | Path, schema: str) -> tuple[list[GridMix], list[DirectIntensity]]:
    """Grid mixes for one region class.

    schema is one of country, us_state, cn_province. The cn_province schema
    may carry pre-computed intensity columns (intensity_pog, optional
    intensity_lca) instead of source fractions, since the provincial source
    publishes emission factors directly.
    """
    if schema not in ("country", "us_state", "cn_province"):
        raise DataError(f"unknown grid-mix schema {schema!r}")
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as f:
        header = next(csv.reader(f), None)
    if not header or "region_id" not in header:
        raise DataError(f"{path.name}: missing column(s) region_id")
    source_names = {s.value for s in GRID_SOURCES}
    known = source_names | {"region_id", "intensity_pog", "intensity_lca"}
    unknown = [c for c in header if c not in known]
    if unknown:
        raise DataError(f"{path.name}: unknown source column(s) {', '.join(unknown)}")
    if ("intensity_pog" in header) and schema != "cn_province":
        raise DataError(f"{path.name}: direct intensity columns only allowed in cn_province schema")

    mixes: list[GridMix] = []
    direct: list[DirectIntensity] = []
    for row in _read_rows(path, ("region_id",)):
        region_id = row["region_id"]
        ctx = f"{path.name} line {row['_line']}"
        if row.get("intensity_pog"):
            pog = _parse_float(row["intensity_pog"], ctx)
            lca_raw = row.get("intensity_lca", "")
            lca = _parse_float(lca_raw, ctx) if lca_raw else None
            direct.append(DirectIntensity(region_id=region_id, intensity_pog=pog, intensity_lca=lca))
            continue
        shares = {
            Source(name): _parse_float(row[name], ctx)
            for name in source_names
            if row.get(name, "") != ""
        }
        mixes.append(GridMix(region_id=region_id, shares=shares))
    return mixes, direct


def parse_facilities(path: str | Path) -> list[Facility]:
    facilities = []
    for row in _read_rows(
        path,
        ("facility_id", "region_id", "hashrate_ths", "power_mw", "source", "counterfactual", "start_date"),
    ):
        ctx = f"facilities line {row['_line']}"
        try:
            source = Source(row["source"])
        except ValueError:
            raise DataError(f"{ctx}: unknown source {row['source']!r}") from None
        facilities.append(
            Facility(
                facility_id=row["facility_id"],
                region_id=row["region_id"],
                source=source,
                hashrate_ths=_parse_float(row["hashrate_ths"], ctx) if row["hashrate_ths"] else None,
                power_mw=_parse_float(row["power_mw"], ctx) if row["power_mw"] else None,
                counterfactual=Counterfactual(row["counterfactual"]) if row["counterfactual"] else Counterfactual.NONE,
                start_date=date.fromisoformat(row["start_date"]) if row["start_date"] else None,
            )
        )
    return facilities


def parse_equipment(path: str | Path) -> list[Equipment]:
    equipment = []
    for row in _read_rows(path, ("model", "efficiency_j_per_th")):
        equipment.append(
            Equipment(
                model=row["model"],
                efficiency_j_per_th=_parse_float(
                    row["efficiency_j_per_th"], f"equipment line {row['_line']}"
                ),
            )
        )
    if not equipment:
        raise DataError(f"{Path(path).name}: no equipment rows")
    return equipment


_PARAM_FIELDS = {
    "hashrate_ths",
    "subsidy_btc_per_block",
    "fees_btc_per_block",
    "btc_price_usd",
    "electricity_price_usd_per_kwh",
    "pue",
    "blocks_per_day",
    "profitability_threshold",
}


def parse_network_params(path: str | Path) -> NetworkParams:
    """Flat `key = value` text file carrying the NetworkParams fields."""
    path = Path(path)
    values: dict[str, float] = {}
    for i, line in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, raw = line.partition("=")
        if not sep:
            raise DataError(f"{path.name} line {i}: expected `key = value`")
        key = key.strip()
        if key not in _PARAM_FIELDS:
            raise DataError(f"{path.name} line {i}: unknown parameter {key!r}")
        if key in values:
            raise DataError(f"{path.name} line {i}: duplicate parameter {key!r}")
        values[key] = _parse_float(raw.strip(), f"{path.name} line {i}")
    missing = _PARAM_FIELDS - {"blocks_per_day", "profitability_threshold"} - set(values)
    if missing:
        raise DataError(f"{path.name}: missing parameter(s) {', '.join(sorted(missing))}")
    return NetworkParams(**values)


def parse_leaf_weights(path: str | Path) -> dict[str, dict[str, float]]:
    """country_id -> {leaf_id: weight} from the sub-national breakdown file."""
    weights: dict[str, dict[str, float]] = {}
    for row in _read_rows(path, ("country_id", "leaf_id", "weight")):
        w = _parse_float(row["weight"], f"leaf_weights line {row['_line']}")
        per_country = weights.setdefault(row["country_id"], {})
        if row["leaf_id"] in per_country:
            raise DataError(f"leaf_weights: duplicate leaf {row['leaf_id']!r}")
        per_country[row["leaf_id"]] = w
    return weights


def parse_groups(path: str | Path) -> dict[str, frozenset[str]]:
    members: dict[str, set[str]] = {}
    for row in _read_rows(path, ("group_id", "member_region_id")):
        members.setdefault(row["group_id"], set()).add(row["member_region_id"])
    return {g: frozenset(m) for g, m in members.items()}


def load_intensity_table(path: str | Path) -> IntensityTable:
    """Source intensity table: one row per grid source with POG and LCA
    columns, plus methane_flared / methane_vented rows."""
    pog: dict[Source, float] = {}
    lca: dict[Source, float] = {}
    methane: dict[str, float] = {}
    for row in _read_rows(path, ("source", "pog", "lca")):
        ctx = f"intensity_table line {row['_line']}"
        name = row["source"]
        if name in ("methane_flared", "methane_vented"):
            p, l = _parse_float(row["pog"], ctx), _parse_float(row["lca"], ctx)
            if p != l:
                raise DataError(f"{ctx}: methane credits must match under both bases")
            methane[name] = p
            continue
        try:
            src = Source(name)
        except ValueError:
            raise DataError(f"{ctx}: unknown source {name!r}") from None
        if src not in GRID_SOURCES:
            raise DataError(f"{ctx}: {name} cannot carry a grid intensity")
        pog[src] = _parse_float(row["pog"], ctx)
        lca[src] = _parse_float(row["lca"], ctx)
    missing = [s.value for s in GRID_SOURCES if s not in pog]
    missing += [m for m in ("methane_flared", "methane_vented") if m not in methane]
    if missing:
        raise DataError(f"intensity_table: missing row(s) {', '.join(missing)}")
    return IntensityTable(
        pog=pog,
        lca=lca,
        methane_flared=methane["methane_flared"],
        methane_vented=methane["methane_vented"],
    )


def _parse_fixture_value(raw: str, context: str) -> Decimal:
    try:
        value = Decimal(raw)
    except InvalidOperation:
        raise DataError(f"{context}: {raw!r} is not a number") from None
    if value.as_tuple().exponent != -2:
        raise DataError(f"{context}: {raw!r} must carry exactly two decimal places")
    return value


def parse_fixture(path: str | Path, table_id: str) -> FixtureTable:
    """One transcribed reference table (I, II, III, or IV)."""
    if table_id not in FIXTURE_LABEL_COLUMNS:
        raise DataError(f"unknown fixture table {table_id!r}")
    label_cols = FIXTURE_LABEL_COLUMNS[table_id]
    rows = []
    for row in _read_rows(path, label_cols + FIXTURE_VALUE_COLUMNS):
        ctx = f"table {table_id} line {row['_line']}"
        labels = tuple(row[c] for c in label_cols)
        values = [_parse_fixture_value(row[c], ctx) for c in FIXTURE_VALUE_COLUMNS]
        rows.append(FixtureRow(labels, *values))
    return FixtureTable(table_id=table_id, label_columns=label_cols, rows=tuple(rows))
