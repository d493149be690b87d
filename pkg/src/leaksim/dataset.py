"""Loading a data directory into one immutable evaluation bundle.

A dataset directory holds regions.csv plus either a prebuilt atlas.json or
the raw inputs to build one (hashrate snapshot, facilities, leaf weights).
Grid data arrives as per-schema mix files and optional direct emission
factors; network parameters and the equipment list drive the power model.
An optional dataset.json manifest can name the dataset and pin its annual
energy instead of deriving it from the power model.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from datetime import date
from pathlib import Path

from . import atlas as atlas_mod
from . import ingest
from .carbon import CarbonModel
from .model import Atlas, DataError, IntensityTable, RegionRegistry, Supply, build_registry
from .power import NetworkParams, PowerEstimate, estimate_power

log = logging.getLogger(__name__)

GRID_MIX_FILES = {
    "grid_mix_country.csv": "country",
    "grid_mix_us_state.csv": "us_state",
    "grid_mix_cn_province.csv": "cn_province",
}


@dataclass(frozen=True)
class Dataset:
    root: Path
    name: str
    registry: RegionRegistry
    atlas: Atlas
    carbon: CarbonModel
    energy_twh: float
    params: NetworkParams | None = None
    power: PowerEstimate | None = None


def build_atlas_from_raw(
    root: Path,
    registry: RegionRegistry,
    params: NetworkParams | None,
    power: PowerEstimate | None,
    as_of: date | None = None,
) -> Atlas:
    """Snapshot -> dated adjustments -> facility merge -> leaf distribution."""
    snapshot_path = root / "snapshot.csv"
    if not snapshot_path.exists():
        raise DataError(f"{root}: neither atlas.json nor snapshot.csv present")
    snapshot = ingest.parse_hashrate_snapshot(snapshot_path)
    adjusted = atlas_mod.apply_post_cbeci_adjustments(snapshot)

    facilities = []
    facilities_path = root / "facilities.csv"
    if facilities_path.exists():
        facilities = ingest.parse_facilities(facilities_path)
        if power is None or params is None:
            raise DataError("facilities.csv needs network_params.txt and equipment.csv")

    row_id = next((r.id for r in registry.aggregates()), "ROW")
    built = atlas_mod.merge_facilities(
        adjusted,
        facilities,
        power if power is not None else _unit_power(),
        params.hashrate_ths if params is not None else 1.0,
        registry,
        as_of=as_of,
        row_region_id=row_id,
    )

    weights_path = root / "leaf_weights.csv"
    if weights_path.exists():
        for country_id, weights in sorted(ingest.parse_leaf_weights(weights_path).items()):
            built = atlas_mod.distribute_national_to_leaves(built, country_id, weights, registry)
    return built


def _unit_power() -> PowerEstimate:
    return PowerEstimate(lower_gw=1.0, best_gw=1.0, upper_gw=1.0, annual_twh=8.76, profitable_models=())


def load_dataset(root: str | Path) -> Dataset:
    root = Path(root)
    if not root.is_dir():
        raise DataError(f"dataset directory {root} does not exist")

    manifest = {}
    manifest_path = root / "dataset.json"
    if manifest_path.exists():
        manifest = json.loads(manifest_path.read_text(encoding="utf-8"))

    regions_path = root / "regions.csv"
    if not regions_path.exists():
        raise DataError(f"{root}: regions.csv is required")
    groups = {}
    if (root / "groups.csv").exists():
        groups = ingest.parse_groups(root / "groups.csv")
    registry = build_registry(ingest.parse_regions(regions_path), groups)

    params = power = None
    if (root / "network_params.txt").exists():
        params = ingest.parse_network_params(root / "network_params.txt")
        if (root / "equipment.csv").exists():
            power = estimate_power(params, ingest.parse_equipment(root / "equipment.csv"))

    atlas_path = root / "atlas.json"
    if atlas_path.exists():
        built = atlas_mod.load_atlas(atlas_path)
    else:
        as_of = date.fromisoformat(manifest["as_of"]) if "as_of" in manifest else None
        built = build_atlas_from_raw(root, registry, params, power, as_of=as_of)

    table = IntensityTable.default()
    if (root / "intensity_table.csv").exists():
        table = ingest.load_intensity_table(root / "intensity_table.csv")

    mixes, direct = [], []
    for filename, schema in GRID_MIX_FILES.items():
        path = root / filename
        if path.exists():
            m, d = ingest.parse_grid_mix(path, schema)
            mixes.extend(m)
            direct.extend(d)
    if (root / "direct_intensity.csv").exists():
        _, d = ingest.parse_grid_mix(root / "direct_intensity.csv", "cn_province")
        direct.extend(d)

    row_weights = {
        e.region_id: e.share
        for e in built.entries
        if e.supply is Supply.GRID and e.region_id != built.row_region_id
    }
    carbon = CarbonModel(mixes, direct, table, row_weights=row_weights)

    if "energy_twh" in manifest:
        energy = float(manifest["energy_twh"])
    elif power is not None:
        energy = power.annual_twh
    else:
        raise DataError(f"{root}: no energy_twh in dataset.json and no power model inputs")

    return Dataset(
        root=root,
        name=manifest.get("name", root.name),
        registry=registry,
        atlas=built,
        carbon=carbon,
        energy_twh=energy,
        params=params,
        power=power,
    )
