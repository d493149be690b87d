"""Domain types shared by every other module.

Regions live in a flat registry with optional country -> state/province
nesting (only the US and China are broken down sub-nationally; everything
else is a single country unit, plus one rest-of-world aggregate). Hash-rate
shares are stored as fractions of the global total, never absolute EH/s.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Iterator, Mapping

SHARE_TOL = 1e-9  # hash-rate share sums: exact arithmetic expected
MIX_TOL = 1e-6    # grid-mix sums: published datasets round to ppm


class LeaksimError(Exception):
    """Base class for every error this package raises on bad data."""


class DataError(LeaksimError):
    """Malformed, inconsistent, or unresolvable input data."""


class Level(str, Enum):
    COUNTRY = "country"
    US_STATE = "us_state"
    CN_PROVINCE = "cn_province"
    AGGREGATE = "aggregate"


class Supply(str, Enum):
    GRID = "grid"
    OFFGRID = "offgrid"


class Source(str, Enum):
    COAL = "coal"
    GAS = "gas"
    OTHER_FOSSIL = "other_fossil"
    SOLAR = "solar"
    WIND = "wind"
    NUCLEAR = "nuclear"
    HYDRO = "hydro"
    OTHER_RENEWABLE = "other_renewable"
    METHANE = "methane"  # off-grid only: otherwise vented/flared gas


#: The eight sources a grid mix may contain (methane is off-grid only).
GRID_SOURCES: tuple[Source, ...] = tuple(s for s in Source if s is not Source.METHANE)


class Counterfactual(str, Enum):
    VENTED = "vented"
    FLARED = "flared"
    NONE = "none"


class Basis(str, Enum):
    """Emission accounting basis: combustion-only vs full life cycle."""

    POG = "pog"
    LCA = "lca"


@dataclass(frozen=True)
class Region:
    id: str
    name: str
    level: Level = Level.COUNTRY
    parent: str | None = None
    iso_code: str | None = None


class RegionRegistry:
    """Lookup structure over regions: by id, by parent country, by group."""

    def __init__(self, regions: Iterable[Region], groups: Mapping[str, frozenset[str]] | None = None):
        self._by_id: dict[str, Region] = {r.id: r for r in regions}
        self._children: dict[str, tuple[Region, ...]] = {}
        for r in self._by_id.values():
            if r.parent is not None:
                self._children.setdefault(r.parent, ())
                self._children[r.parent] += (r,)
        self.groups: dict[str, frozenset[str]] = dict(groups or {})

    def get(self, region_id: str) -> Region | None:
        return self._by_id.get(region_id)

    def require(self, region_id: str) -> Region:
        region = self._by_id.get(region_id)
        if region is None:
            raise DataError(f"unknown region {region_id!r}")
        return region

    def children(self, country_id: str) -> tuple[Region, ...]:
        """Sub-national leaves of a country, in insertion order."""
        return self._children.get(country_id, ())

    def aggregates(self) -> tuple[Region, ...]:
        return tuple(r for r in self._by_id.values() if r.level is Level.AGGREGATE)

    def __contains__(self, region_id: str) -> bool:
        return region_id in self._by_id

    def __len__(self) -> int:
        return len(self._by_id)

    def __iter__(self) -> Iterator[Region]:
        return iter(self._by_id.values())


def build_registry(
    region_records: Iterable[Region | Mapping],
    groups: Mapping[str, frozenset[str]] | None = None,
) -> RegionRegistry:
    """Build a registry from parsed region records.

    Raises DataError on duplicate ids, dangling or non-country parents, and
    when no rest-of-world aggregate region exists.
    """
    regions: list[Region] = []
    for rec in region_records:
        if isinstance(rec, Region):
            regions.append(rec)
        else:
            regions.append(
                Region(
                    id=rec["id"],
                    name=rec.get("name") or rec["id"],
                    level=Level(rec.get("level") or Level.COUNTRY),
                    parent=rec.get("parent") or None,
                    iso_code=rec.get("iso_code") or None,
                )
            )

    seen: set[str] = set()
    for r in regions:
        if r.id in seen:
            raise DataError(f"duplicate region id {r.id!r}")
        seen.add(r.id)

    by_id = {r.id: r for r in regions}
    for r in regions:
        if r.parent is None:
            continue
        parent = by_id.get(r.parent)
        if parent is None:
            raise DataError(f"region {r.id!r} has dangling parent {r.parent!r}")
        if parent.level is not Level.COUNTRY:
            raise DataError(f"region {r.id!r} has non-country parent {r.parent!r}")

    if not any(r.level is Level.AGGREGATE for r in regions):
        raise DataError("no rest-of-world aggregate region (level=aggregate) in records")

    return RegionRegistry(regions, groups)


@dataclass(frozen=True)
class HashRateEntry:
    """One slice of global hash rate: a region plus how it is powered.

    Grid entries take the regional grid's intensity; off-grid entries carry
    their own energy source. Methane entries additionally say what would have
    happened to the gas (vented or flared) absent the miner.
    """

    region_id: str
    share: float
    supply: Supply = Supply.GRID
    source: Source | None = None
    counterfactual: Counterfactual = Counterfactual.NONE

    def __post_init__(self):
        # Structural nonsense is rejected here; data-level violations
        # (negative share, methane without counterfactual) stay constructible
        # so that validate_atlas can report them as findings.
        if self.supply is Supply.GRID:
            if self.source is not None:
                raise DataError(f"grid entry for {self.region_id} must not carry a source")
            if self.counterfactual is not Counterfactual.NONE:
                raise DataError(f"grid entry for {self.region_id} must not carry a counterfactual")
        else:
            if self.source is None:
                raise DataError(f"off-grid entry for {self.region_id} requires a source")
            if self.source is not Source.METHANE and self.counterfactual is not Counterfactual.NONE:
                raise DataError(
                    f"counterfactual only applies to methane (entry for {self.region_id})"
                )

    def kind(self) -> tuple[Supply, Source | None, Counterfactual]:
        return (self.supply, self.source, self.counterfactual)


@dataclass(frozen=True)
class Atlas:
    """A dated cross-section of where the global hash rate sits.

    Plain container: construction never enforces normalization, so invalid
    atlases can be built and handed to validate_atlas.
    """

    entries: tuple[HashRateEntry, ...]
    as_of: str = ""
    row_region_id: str = "ROW"

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(self.entries))

    def total_share(self) -> float:
        return sum(e.share for e in self.entries)

    def region_ids(self) -> tuple[str, ...]:
        seen: dict[str, None] = {}
        for e in self.entries:
            seen.setdefault(e.region_id, None)
        return tuple(seen)

    def region_share(self, region_id: str) -> float:
        return sum(e.share for e in self.entries if e.region_id == region_id)


@dataclass(frozen=True)
class GridMix:
    """Per-region electricity generation shares over the eight grid sources."""

    region_id: str
    shares: Mapping[Source, float]

    def __post_init__(self):
        shares = {Source(k): float(v) for k, v in self.shares.items()}
        for src in shares:
            if src not in GRID_SOURCES:
                raise DataError(f"{src.value} is not a grid source (mix for {self.region_id})")
        for src, v in shares.items():
            if not 0.0 <= v <= 1.0:
                raise DataError(f"mix share {src.value}={v} out of [0,1] for {self.region_id}")
        total = sum(shares.values())
        if abs(total - 1.0) > MIX_TOL:
            raise DataError(f"mix shares for {self.region_id} sum to {total:.8f}, not 1")
        object.__setattr__(self, "shares", shares)

    def share(self, source: Source) -> float:
        return self.shares.get(source, 0.0)


@dataclass(frozen=True)
class DirectIntensity:
    """A pre-computed grid intensity, used where sources publish emission
    factors instead of generation mixes (Chinese provinces)."""

    region_id: str
    intensity_pog: float
    intensity_lca: float | None = None  # falls back to the POG factor


@dataclass(frozen=True)
class IntensityTable:
    """Per-source carbon intensities in g CO2eq/kWh under both bases, plus
    the methane counterfactual credits (identical under POG and LCA)."""

    pog: Mapping[Source, float]
    lca: Mapping[Source, float]
    methane_flared: float = -0.49
    methane_vented: float = -5.55

    def source_intensity(self, source: Source, basis: Basis) -> float:
        table = self.pog if basis is Basis.POG else self.lca
        return table[source]

    @classmethod
    def default(cls) -> "IntensityTable":
        pog = {
            Source.COAL: 820.0,
            Source.GAS: 490.0,
            Source.OTHER_FOSSIL: 700.0,
            Source.SOLAR: 0.0,
            Source.WIND: 0.0,
            Source.NUCLEAR: 0.0,
            Source.HYDRO: 0.0,
            Source.OTHER_RENEWABLE: 0.0,
        }
        lca = {
            Source.COAL: 820.0,
            Source.GAS: 490.0,
            Source.OTHER_FOSSIL: 700.0,
            Source.SOLAR: 48.0,
            Source.WIND: 11.0,
            Source.NUCLEAR: 12.0,
            Source.HYDRO: 24.0,
            Source.OTHER_RENEWABLE: 38.0,
        }
        return cls(pog=pog, lca=lca)


@dataclass(frozen=True)
class Finding:
    """One validation violation. Findings are data, not exceptions."""

    code: str
    message: str
    region_id: str | None = None


@dataclass(frozen=True)
class ValidationReport:
    findings: tuple[Finding, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.findings

    def __iter__(self) -> Iterator[Finding]:
        return iter(self.findings)

    def __len__(self) -> int:
        return len(self.findings)


def validate_atlas(atlas: Atlas, registry: RegionRegistry) -> ValidationReport:
    """Check an atlas against its registry; an empty report means valid.

    Pure and order-independent: permuting entries yields the same report.
    """
    findings: list[Finding] = []

    total = atlas.total_share()
    if abs(total - 1.0) > SHARE_TOL:
        findings.append(Finding("share-sum", f"share sum = {total!r}, expected 1"))

    per_region: list[Finding] = []
    seen_kinds: set[tuple[str, Supply, Source | None, Counterfactual]] = set()
    for e in atlas.entries:
        if e.share < 0:
            per_region.append(Finding("negative-share", f"share {e.share!r} < 0", e.region_id))
        if e.region_id not in registry:
            per_region.append(Finding("unknown-region", f"region {e.region_id!r} not in registry", e.region_id))
        if e.source is Source.METHANE and e.counterfactual is Counterfactual.NONE:
            per_region.append(Finding("methane-counterfactual", "methane counterfactual missing", e.region_id))
        key = (e.region_id, *e.kind())
        if key in seen_kinds:
            per_region.append(
                Finding("duplicate-entry", f"multiple entries of kind {e.kind()!r}", e.region_id)
            )
        seen_kinds.add(key)
    if atlas.row_region_id not in registry:
        findings.append(
            Finding("unknown-region", f"ROW region {atlas.row_region_id!r} not in registry", atlas.row_region_id)
        )

    findings.extend(sorted(per_region, key=lambda f: (f.code, f.region_id or "", f.message)))
    return ValidationReport(tuple(findings))
