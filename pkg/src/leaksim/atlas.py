"""Building the present-day hash-rate atlas.

Starts from a country-level snapshot of the public miner map, applies the
two dated adjustments (China pinned to 15%, Kazakhstan halved, freed mass
redistributed proportionally), merges the hand-collected facility registry
under the override rule, and breaks the US and China down to leaves.

Every transformation conserves total share to 1e-9 and returns new values;
nothing here mutates its inputs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from datetime import date
from pathlib import Path
from typing import Iterable, Mapping

from .ingest import Facility
from .model import (
    Atlas,
    Counterfactual,
    DataError,
    HashRateEntry,
    RegionRegistry,
    SHARE_TOL,
    Source,
    Supply,
)
from .power import PowerEstimate

CHINA_REGION = "CN"
KAZAKHSTAN_REGION = "KZ"
CHINA_PINNED_SHARE = 0.15
KAZAKHSTAN_RETENTION = 0.5

WEIGHT_SUM_TOL = 1e-6


@dataclass(frozen=True)
class AdjustedSnapshot:
    """Snapshot shares after the one-shot dated adjustments.

    The wrapper is the tag: applying the adjustments to an already-adjusted
    snapshot is the identity, which makes idempotence testable.
    """

    shares: Mapping[str, float]


def apply_post_cbeci_adjustments(
    snapshot: Mapping[str, float] | AdjustedSnapshot,
) -> AdjustedSnapshot:
    """Pin China to 15%, halve Kazakhstan, redistribute the freed mass to all
    other regions in proportion to their snapshot shares.

    Symmetric when China starts below 15%: the missing mass is drawn from the
    others proportionally. Already-adjusted snapshots pass through unchanged.
    """
    if isinstance(snapshot, AdjustedSnapshot):
        return snapshot
    shares = dict(snapshot)
    for required in (CHINA_REGION, KAZAKHSTAN_REGION):
        if required not in shares:
            raise DataError(f"snapshot missing {required!r}; cannot apply dated adjustments")
    total = sum(shares.values())
    if abs(total - 1.0) > SHARE_TOL:
        raise DataError(f"snapshot not normalized (sum {total!r}); parse it first")

    cn_old = shares[CHINA_REGION]
    kz_old = shares[KAZAKHSTAN_REGION]
    freed = (cn_old - CHINA_PINNED_SHARE) + kz_old * (1.0 - KAZAKHSTAN_RETENTION)
    rest_total = total - cn_old - kz_old
    if rest_total <= 0 and freed != 0:
        raise DataError("no other regions to absorb the adjustment mass")

    adjusted = {}
    scale = 1.0 + (freed / rest_total if rest_total > 0 else 0.0)
    if scale < 0:
        raise DataError("adjustment would drive other regions' shares negative")
    for region_id, share in shares.items():
        if region_id == CHINA_REGION:
            adjusted[region_id] = CHINA_PINNED_SHARE
        elif region_id == KAZAKHSTAN_REGION:
            adjusted[region_id] = kz_old * KAZAKHSTAN_RETENTION
        else:
            adjusted[region_id] = share * scale
    return AdjustedSnapshot(adjusted)


def _facility_share(facility: Facility, power: PowerEstimate, network_hashrate_ths: float) -> float:
    if facility.hashrate_ths is not None:
        return facility.hashrate_ths / network_hashrate_ths
    # MW capacity is read as wall power, same convention as the network total
    return facility.power_mw / (power.best_gw * 1000.0)


def merge_facilities(
    shares: Mapping[str, float] | AdjustedSnapshot,
    facilities: Iterable[Facility],
    power: PowerEstimate,
    network_hashrate_ths: float,
    registry: RegionRegistry,
    as_of: date | None = None,
    row_region_id: str = "ROW",
) -> Atlas:
    """Merge hand-mapped facilities into the snapshot under the override rule.

    Where a region's mapped facilities exceed its snapshot share, the mapped
    data wins outright (the grid entry disappears) and the excess is deducted
    from the rest-of-world aggregate. Otherwise facilities carve an off-grid
    portion out of the region's existing share.
    """
    if isinstance(shares, AdjustedSnapshot):
        shares = shares.shares
    if row_region_id not in registry:
        raise DataError(f"ROW region {row_region_id!r} not in registry")

    # Aggregate facility shares per region and per (source, counterfactual)
    # kind; sorting keeps the result independent of facility row order.
    per_region: dict[str, dict[tuple[str, str], float]] = {}
    for f in sorted(facilities, key=lambda f: f.facility_id):
        if f.region_id not in registry:
            raise DataError(f"facility {f.facility_id!r} in unknown region {f.region_id!r}")
        if as_of is not None and f.start_date is not None and f.start_date > as_of:
            continue
        kind = (f.source.value, f.counterfactual.value)
        kinds = per_region.setdefault(f.region_id, {})
        kinds[kind] = kinds.get(kind, 0.0) + _facility_share(f, power, network_hashrate_ths)

    for region_id in shares:
        registry.require(region_id)

    entries: list[HashRateEntry] = []
    row_share = shares.get(row_region_id, 0.0)
    deduction = 0.0
    region_ids = sorted(set(shares) | set(per_region))
    for region_id in region_ids:
        if region_id == row_region_id:
            continue
        snapshot_share = shares.get(region_id, 0.0)
        kinds = per_region.get(region_id, {})
        facility_total = sum(kinds.values())
        for (source, counterfactual), share in sorted(kinds.items()):
            entries.append(
                HashRateEntry(
                    region_id=region_id,
                    share=share,
                    supply=Supply.OFFGRID,
                    source=Source(source),
                    counterfactual=Counterfactual(counterfactual),
                )
            )
        if facility_total > snapshot_share:
            deduction += facility_total - snapshot_share
        else:
            entries.append(HashRateEntry(region_id=region_id, share=snapshot_share - facility_total))

    if row_region_id in per_region:
        kinds = per_region[row_region_id]
        for (source, counterfactual), share in sorted(kinds.items()):
            entries.append(
                HashRateEntry(
                    region_id=row_region_id,
                    share=share,
                    supply=Supply.OFFGRID,
                    source=Source(source),
                    counterfactual=Counterfactual(counterfactual),
                )
            )
        row_share -= sum(kinds.values())

    row_share -= deduction
    if row_share < -SHARE_TOL:
        raise DataError(
            f"facility data exceeds the rest-of-world residual by {-row_share:.3e}; "
            f"cannot deduct from {row_region_id!r}"
        )
    entries.append(HashRateEntry(region_id=row_region_id, share=max(row_share, 0.0)))

    return Atlas(
        entries=tuple(entries),
        as_of=as_of.isoformat() if as_of else "",
        row_region_id=row_region_id,
    )


def distribute_national_to_leaves(
    atlas: Atlas,
    country_id: str,
    leaf_weights: Mapping[str, float],
    registry: RegionRegistry,
) -> Atlas:
    """Replace a country's grid entry with leaf-level grid entries.

    Off-grid entries already pinned to leaves (or to the country) stay put.
    """
    leaves = {r.id for r in registry.children(country_id)}
    if not leaves:
        raise DataError(f"country {country_id!r} has no sub-national leaves")
    unknown = set(leaf_weights) - leaves
    if unknown:
        raise DataError(f"weights name non-leaf region(s) {', '.join(sorted(unknown))}")
    weight_sum = sum(leaf_weights.values())
    if abs(weight_sum - 1.0) > WEIGHT_SUM_TOL:
        raise DataError(f"leaf weights for {country_id!r} sum to {weight_sum:.8f}, not 1")
    if any(w < 0 for w in leaf_weights.values()):
        raise DataError(f"negative leaf weight for {country_id!r}")

    grid_entries = [
        e for e in atlas.entries if e.region_id == country_id and e.supply is Supply.GRID
    ]
    if not grid_entries:
        raise DataError(f"no country-level grid entry to distribute for {country_id!r}")
    country_share = sum(e.share for e in grid_entries)

    entries = [
        e for e in atlas.entries if not (e.region_id == country_id and e.supply is Supply.GRID)
    ]
    for leaf_id in sorted(leaf_weights):
        weight = leaf_weights[leaf_id] / weight_sum
        entries.append(HashRateEntry(region_id=leaf_id, share=country_share * weight))

    return Atlas(entries=tuple(entries), as_of=atlas.as_of, row_region_id=atlas.row_region_id)


def atlas_to_json(atlas: Atlas) -> str:
    payload = {
        "as_of": atlas.as_of,
        "row_region_id": atlas.row_region_id,
        "entries": [
            {
                "region_id": e.region_id,
                "share": e.share,
                "supply": e.supply.value,
                "source": e.source.value if e.source else None,
                "counterfactual": e.counterfactual.value,
            }
            for e in atlas.entries
        ],
    }
    return json.dumps(payload, indent=2)


def atlas_from_json(text: str) -> Atlas:
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DataError(f"atlas.json is not valid JSON: {exc}") from None
    entries = []
    for raw in payload.get("entries", []):
        entries.append(
            HashRateEntry(
                region_id=raw["region_id"],
                share=float(raw["share"]),
                supply=Supply(raw.get("supply", "grid")),
                source=Source(raw["source"]) if raw.get("source") else None,
                counterfactual=Counterfactual(raw.get("counterfactual") or "none"),
            )
        )
    return Atlas(
        entries=tuple(entries),
        as_of=payload.get("as_of", ""),
        row_region_id=payload.get("row_region_id", "ROW"),
    )


def load_atlas(path: str | Path) -> Atlas:
    return atlas_from_json(Path(path).read_text(encoding="utf-8"))


def save_atlas(atlas: Atlas, path: str | Path) -> None:
    Path(path).write_text(atlas_to_json(atlas) + "\n", encoding="utf-8")
