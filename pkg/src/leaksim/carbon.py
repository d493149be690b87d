"""Carbon intensity of hash-rate entries and baseline network emissions.

Grid entries inherit their region's generation mix (or a published direct
emission factor); off-grid entries carry the intensity of their own source.
Methane entries are credited for gas that would otherwise have been vented
or flared, which makes their intensity negative under both bases.

Unit conventions throughout: intensity g CO2eq/kWh, energy TWh/yr,
emissions kt CO2eq/yr. The product TWh x g/kWh is exactly kt.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .model import (
    Atlas,
    Basis,
    Counterfactual,
    DataError,
    DirectIntensity,
    GridMix,
    HashRateEntry,
    IntensityTable,
    Source,
    Supply,
)


def grid_intensity(mix: GridMix, basis: Basis, table: IntensityTable) -> float:
    """Share-weighted intensity of a generation mix, in g/kWh."""
    return sum(mix.share(src) * table.source_intensity(src, basis) for src in mix.shares)


def methane_counterfactual_intensity(counterfactual: Counterfactual, table: IntensityTable) -> float:
    if counterfactual is Counterfactual.FLARED:
        return table.methane_flared
    if counterfactual is Counterfactual.VENTED:
        return table.methane_vented
    raise DataError("methane intensity requires a vented or flared counterfactual")


class CarbonModel:
    """Resolves any hash-rate entry to an intensity under a chosen basis.

    Region intensities come from grid mixes where available, from direct
    factors otherwise. The rest-of-world aggregate falls back to the
    share-weighted average over all regions with a known grid intensity
    unless the dataset supplies an explicit ROW mix or factor.
    """

    def __init__(
        self,
        mixes: Iterable[GridMix] = (),
        direct: Iterable[DirectIntensity] = (),
        table: IntensityTable | None = None,
        row_weights: Mapping[str, float] | None = None,
    ):
        self.table = table or IntensityTable.default()
        self.row_weights = dict(row_weights) if row_weights else None
        self.mixes: dict[str, GridMix] = {}
        for m in mixes:
            if m.region_id in self.mixes:
                raise DataError(f"duplicate grid mix for region {m.region_id!r}")
            self.mixes[m.region_id] = m
        self.direct: dict[str, DirectIntensity] = {}
        for d in direct:
            if d.region_id in self.mixes or d.region_id in self.direct:
                raise DataError(f"duplicate intensity data for region {d.region_id!r}")
            self.direct[d.region_id] = d

    def with_table(self, table: IntensityTable) -> "CarbonModel":
        """Same grid data, different source intensity constants."""
        return CarbonModel(
            self.mixes.values(), self.direct.values(), table, row_weights=self.row_weights
        )

    def region_grid_intensity(self, region_id: str, basis: Basis) -> float:
        mix = self.mixes.get(region_id)
        if mix is not None:
            return grid_intensity(mix, basis, self.table)
        d = self.direct.get(region_id)
        if d is not None:
            if basis is Basis.LCA and d.intensity_lca is not None:
                return d.intensity_lca
            return d.intensity_pog
        raise DataError(f"no grid mix or direct intensity for region {region_id!r}")

    def entry_intensity(self, entry: HashRateEntry, basis: Basis, row_region_id: str | None = None) -> float:
        if entry.supply is Supply.GRID:
            if (
                row_region_id is not None
                and entry.region_id == row_region_id
                and entry.region_id not in self.mixes
                and entry.region_id not in self.direct
            ):
                return self.world_average_intensity(basis)
            return self.region_grid_intensity(entry.region_id, basis)
        if entry.source is Source.METHANE:
            return methane_counterfactual_intensity(entry.counterfactual, self.table)
        return self.table.source_intensity(entry.source, basis)

    def world_average_intensity(self, basis: Basis, weights: Mapping[str, float] | None = None) -> float:
        """Average grid intensity over known regions; share-weighted when
        weights are given, simple mean otherwise."""
        if weights is None:
            weights = self.row_weights
        region_ids = sorted(set(self.mixes) | set(self.direct))
        if not region_ids:
            raise DataError("no grid intensity data to average for the ROW aggregate")
        if weights:
            pairs = [(weights[r], self.region_grid_intensity(r, basis)) for r in region_ids if weights.get(r, 0.0) > 0]
            total = sum(w for w, _ in pairs)
            if total > 0:
                return sum(w * i for w, i in pairs) / total
        return sum(self.region_grid_intensity(r, basis) for r in region_ids) / len(region_ids)


@dataclass(frozen=True)
class EmissionsLedger:
    """Annualized emissions per region plus the global total, in kt/yr."""

    basis: Basis
    energy_twh: float
    per_region: Mapping[str, float]
    total_kt: float

    def region(self, region_id: str) -> float:
        return self.per_region.get(region_id, 0.0)


def _canonical_entries(atlas: Atlas) -> list[HashRateEntry]:
    # Fixed summation order keeps results bitwise reproducible no matter how
    # the atlas was assembled.
    return sorted(
        atlas.entries,
        key=lambda e: (e.region_id, e.supply.value, e.source.value if e.source else "", e.counterfactual.value),
    )


def baseline_emissions(
    atlas: Atlas,
    energy_twh: float,
    basis: Basis,
    carbon: CarbonModel,
) -> EmissionsLedger:
    """Annual emissions of the network as mapped, before any ban.

    Per entry: kt/yr = energy_twh x share x intensity(g/kWh).
    """
    if energy_twh < 0:
        raise DataError(f"negative annual energy {energy_twh!r}")
    per_region: dict[str, float] = {}
    for e in _canonical_entries(atlas):
        intensity = carbon.entry_intensity(e, basis, row_region_id=atlas.row_region_id)
        kt = energy_twh * e.share * intensity
        per_region[e.region_id] = per_region.get(e.region_id, 0.0) + kt
    total = sum(per_region.values())
    return EmissionsLedger(basis=basis, energy_twh=energy_twh, per_region=per_region, total_kt=total)
