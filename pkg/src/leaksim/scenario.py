"""The ban engine: current-proportion hash-rate redistribution.

A ban suppresses the banned jurisdictions' entries by the effectiveness
fraction and hands the freed share to every non-banned entry in proportion
to its current share. Receiving entries keep their own supply kind and
intensity, total network energy is held constant (the hash rate fully
recovers), and the global carbon delta is the post-ban minus pre-ban
footprint.

Deltas are computed in factored form, effectiveness x (a term that does not
depend on effectiveness), so linearity in the effectiveness knob is exact
rather than a floating-point accident.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .carbon import CarbonModel, baseline_emissions
from .model import Atlas, Basis, DataError, HashRateEntry, LeaksimError, RegionRegistry

#: Leakage rate when no emissions are removed by the ban (division guard).
UNDEFINED = None


class NoDestinationError(LeaksimError):
    """The ban covers every entry with positive share; the freed hash rate
    has nowhere to relocate."""


@dataclass(frozen=True)
class Scenario:
    banned_regions: frozenset[str]
    effectiveness: float = 1.0
    basis: Basis = Basis.POG
    suppression_months: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "banned_regions", frozenset(self.banned_regions))
        if not self.banned_regions:
            raise DataError("scenario needs at least one banned region")
        if not 0.0 <= self.effectiveness <= 1.0:
            raise DataError(f"effectiveness {self.effectiveness!r} outside [0, 1]")
        if self.suppression_months < 0:
            raise DataError("suppression_months cannot be negative")


@dataclass(frozen=True)
class ScenarioResult:
    delta_kt_per_year: float
    per_region_delta: Mapping[str, float]
    baseline_kt: float
    percent_of_baseline: float | None
    one_off_avoidance_kt: float
    leakage_rate: float | None
    post_atlas: Atlas


def resolve_group(group_id: str, registry: RegionRegistry) -> frozenset[str]:
    """Member region ids of a named coalition (e.g. the EU-27)."""
    members = registry.groups.get(group_id)
    if members is None:
        raise DataError(f"unknown group {group_id!r}")
    return members


def expand_banned_regions(
    banned: Iterable[str], registry: RegionRegistry | None
) -> frozenset[str]:
    """A country id implies all of its sub-national leaves."""
    expanded = set(banned)
    if registry is not None:
        for region_id in list(expanded):
            registry.require(region_id)
            expanded.update(r.id for r in registry.children(region_id))
    return frozenset(expanded)


def apply_ban(
    atlas: Atlas, scenario: Scenario, registry: RegionRegistry | None = None
) -> Atlas:
    """Post-ban atlas under current-proportion redistribution.

    Banned entries shrink by the effectiveness fraction; every non-banned
    entry i receives share_i x M / S_rest of the freed mass M.
    """
    banned = expand_banned_regions(scenario.banned_regions, registry)
    e = scenario.effectiveness

    rest_total = sum(x.share for x in atlas.entries if x.region_id not in banned)
    if rest_total <= 0.0:
        raise NoDestinationError("ban covers all positive-share entries; no destination remains")
    banned_total = sum(x.share for x in atlas.entries if x.region_id in banned)
    moved = e * banned_total
    scale = 1.0 + moved / rest_total

    entries = []
    for x in atlas.entries:
        if x.region_id in banned:
            share = x.share * (1.0 - e)
        else:
            share = x.share * scale
        entries.append(
            HashRateEntry(
                region_id=x.region_id,
                share=share,
                supply=x.supply,
                source=x.source,
                counterfactual=x.counterfactual,
            )
        )
    return Atlas(entries=tuple(entries), as_of=atlas.as_of, row_region_id=atlas.row_region_id)


def _emission_terms(
    atlas: Atlas, scenario: Scenario, carbon: CarbonModel, registry: RegionRegistry | None
) -> tuple[frozenset[str], float, float, dict[str, float], dict[str, float]]:
    """Pre-ban share-weighted intensity sums, split banned vs non-banned.

    Returns (banned set, banned total share, non-banned total share,
    per-region banned intensity sums, per-region rest intensity sums).
    Sums are over entries: share x intensity, in g/kWh units.
    """
    banned = expand_banned_regions(scenario.banned_regions, registry)
    banned_share = 0.0
    rest_share = 0.0
    banned_sums: dict[str, float] = {}
    rest_sums: dict[str, float] = {}
    for x in sorted(
        atlas.entries,
        key=lambda x: (x.region_id, x.supply.value, x.source.value if x.source else "", x.counterfactual.value),
    ):
        intensity = carbon.entry_intensity(x, scenario.basis, row_region_id=atlas.row_region_id)
        if x.region_id in banned:
            banned_share += x.share
            banned_sums[x.region_id] = banned_sums.get(x.region_id, 0.0) + x.share * intensity
        else:
            rest_share += x.share
            rest_sums[x.region_id] = rest_sums.get(x.region_id, 0.0) + x.share * intensity
    if rest_share <= 0.0:
        raise NoDestinationError("ban covers all positive-share entries; no destination remains")
    return banned, banned_share, rest_share, banned_sums, rest_sums


def one_off_avoidance(
    atlas: Atlas,
    energy_twh: float,
    scenario: Scenario,
    carbon: CarbonModel,
    registry: RegionRegistry | None = None,
) -> float:
    """Emissions avoided during the suppression window before relocation, kt.

    Depends only on the banned entries' pre-ban emissions; reported
    separately from the annual delta, never netted into it.
    """
    _, _, _, banned_sums, _ = _emission_terms(atlas, scenario, carbon, registry)
    annual_kt = energy_twh * sum(banned_sums.values())
    return (scenario.suppression_months / 12.0) * scenario.effectiveness * annual_kt


def leakage_rate(
    atlas: Atlas,
    scenario: Scenario,
    carbon: CarbonModel,
    registry: RegionRegistry | None = None,
) -> float | None:
    """Emissions gained abroad per unit of emissions removed at home.

    A rate above 1 means the ban backfires. UNDEFINED (None) when the ban
    removes no positive emissions, e.g. a zero- or negative-intensity region.
    """
    _, banned_share, rest_share, banned_sums, rest_sums = _emission_terms(
        atlas, scenario, carbon, registry
    )
    removed = sum(banned_sums.values())
    if removed <= 0.0 or scenario.effectiveness == 0.0:
        return UNDEFINED
    # effectiveness scales removed and gained alike, so the ratio drops it
    gained = banned_share * sum(rest_sums.values()) / rest_share
    return gained / removed


def evaluate(
    atlas: Atlas,
    energy_twh: float,
    scenario: Scenario,
    carbon: CarbonModel,
    registry: RegionRegistry | None = None,
) -> ScenarioResult:
    """Full scenario evaluation: global and per-region deltas, one-off
    avoidance, and leakage rate, all against the pre-ban baseline."""
    banned, banned_share, rest_share, banned_sums, rest_sums = _emission_terms(
        atlas, scenario, carbon, registry
    )
    e = scenario.effectiveness
    removed_rate = sum(banned_sums.values())          # share-weighted g/kWh
    rest_rate = sum(rest_sums.values())
    gain_factor = banned_share / rest_share

    delta = e * energy_twh * (gain_factor * rest_rate - removed_rate)
    per_region: dict[str, float] = {}
    for region_id, s in banned_sums.items():
        per_region[region_id] = -e * energy_twh * s
    for region_id, s in rest_sums.items():
        per_region[region_id] = e * energy_twh * gain_factor * s

    pre = baseline_emissions(atlas, energy_twh, scenario.basis, carbon)
    percent = 100.0 * delta / pre.total_kt if pre.total_kt > 0 else None

    return ScenarioResult(
        delta_kt_per_year=delta,
        per_region_delta=per_region,
        baseline_kt=pre.total_kt,
        percent_of_baseline=percent,
        one_off_avoidance_kt=(scenario.suppression_months / 12.0) * e * energy_twh * removed_rate,
        leakage_rate=(
            gain_factor * rest_rate / removed_rate if removed_rate > 0 and e > 0 else UNDEFINED
        ),
        post_atlas=apply_ban(atlas, scenario, registry),
    )


@dataclass(frozen=True)
class SweepRow:
    region_id: str
    label: str
    full_lca: float
    full_pog: float
    limited_lca: float
    limited_pog: float
    is_group: bool = False


LIMITED_EFFECTIVENESS = 0.5


def sweep_single_bans(
    atlas: Atlas,
    energy_twh: float,
    level: str,
    carbon: CarbonModel,
    registry: RegionRegistry,
    include_groups: bool = True,
) -> list[SweepRow]:
    """Ban each region at a level in turn; emit full/limited deltas per basis.

    Country-level sweeps also evaluate each configured coalition (the EU) as
    a simultaneous ban of all members. Rows sort descending by full-LCA
    delta, the same convention as the published tables; near-ties may order
    differently than print.
    """
    candidates: list[tuple[str, str, frozenset[str]]] = []
    with_entries = {e.region_id for e in atlas.entries}
    for region in registry:
        if region.level.value != level:
            continue
        banned = expand_banned_regions([region.id], registry)
        if banned & with_entries:
            candidates.append((region.id, region.name, banned))
    if include_groups and level == "country":
        for group_id in sorted(registry.groups):
            members = resolve_group(group_id, registry)
            banned = expand_banned_regions(
                [m for m in members if m in registry], registry
            )
            if banned & with_entries:
                candidates.append((group_id, group_id, banned))

    rows = []
    for region_id, label, banned in candidates:
        deltas = {}
        for basis in (Basis.LCA, Basis.POG):
            for e in (1.0, LIMITED_EFFECTIVENESS):
                scenario = Scenario(banned_regions=banned, effectiveness=e, basis=basis)
                deltas[(basis, e)] = evaluate(atlas, energy_twh, scenario, carbon).delta_kt_per_year
        rows.append(
            SweepRow(
                region_id=region_id,
                label=label,
                full_lca=deltas[(Basis.LCA, 1.0)],
                full_pog=deltas[(Basis.POG, 1.0)],
                limited_lca=deltas[(Basis.LCA, LIMITED_EFFECTIVENESS)],
                limited_pog=deltas[(Basis.POG, LIMITED_EFFECTIVENESS)],
                is_group=region_id in registry.groups,
            )
        )
    rows.sort(key=lambda r: r.full_lca, reverse=True)
    return rows
