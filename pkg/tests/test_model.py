import random

import pytest

from leaksim.model import (
    Atlas,
    Counterfactual,
    DataError,
    GridMix,
    HashRateEntry,
    IntensityTable,
    Level,
    Region,
    Source,
    Supply,
    build_registry,
    validate_atlas,
)


def test_build_registry_minimal():
    registry = build_registry(
        [
            {"id": "CA"},
            {"id": "US"},
            {"id": "US-TX", "parent": "US", "level": "us_state"},
            {"id": "ROW", "level": "aggregate"},
        ]
    )
    assert len(registry) == 4
    assert registry.require("US-TX").parent == "US"
    assert [r.id for r in registry.children("US")] == ["US-TX"]
    assert registry.get("XX") is None


def test_build_registry_duplicate_id():
    with pytest.raises(DataError, match="duplicate"):
        build_registry([{"id": "CA"}, {"id": "CA"}, {"id": "ROW", "level": "aggregate"}])


def test_build_registry_dangling_parent():
    with pytest.raises(DataError, match="dangling"):
        build_registry([{"id": "US-TX", "parent": "XX"}, {"id": "ROW", "level": "aggregate"}])


def test_build_registry_non_country_parent():
    with pytest.raises(DataError, match="non-country"):
        build_registry(
            [
                {"id": "ROW", "level": "aggregate"},
                {"id": "X", "parent": "ROW"},
            ]
        )


def test_build_registry_requires_aggregate():
    with pytest.raises(DataError, match="aggregate"):
        build_registry([{"id": "CA"}, {"id": "US"}])


@pytest.fixture()
def small_registry():
    return build_registry(
        [
            {"id": "A"},
            {"id": "B"},
            {"id": "ROW", "level": "aggregate"},
        ]
    )


def test_validate_atlas_ok(small_registry):
    atlas = Atlas(
        entries=(HashRateEntry("A", 0.5), HashRateEntry("B", 0.5)),
        row_region_id="ROW",
    )
    report = validate_atlas(atlas, small_registry)
    assert report.ok
    assert len(report) == 0


def test_validate_atlas_share_sum(small_registry):
    atlas = Atlas(entries=(HashRateEntry("A", 0.5), HashRateEntry("B", 0.6)))
    report = validate_atlas(atlas, small_registry)
    codes = [f.code for f in report]
    assert "share-sum" in codes
    assert "1.1" in next(f for f in report if f.code == "share-sum").message


def test_validate_atlas_negative_and_unknown(small_registry):
    atlas = Atlas(
        entries=(
            HashRateEntry("A", 1.5),
            HashRateEntry("B", -0.5),
            HashRateEntry("NOPE", 0.0),
        )
    )
    codes = {f.code for f in validate_atlas(atlas, small_registry)}
    assert "negative-share" in codes
    assert "unknown-region" in codes


def test_validate_atlas_methane_missing_counterfactual(small_registry):
    entry = HashRateEntry("A", 1.0, Supply.OFFGRID, Source.METHANE)
    report = validate_atlas(Atlas(entries=(entry,)), small_registry)
    assert any(f.code == "methane-counterfactual" for f in report)


def test_validate_atlas_duplicate_kind(small_registry):
    atlas = Atlas(entries=(HashRateEntry("A", 0.5), HashRateEntry("A", 0.5)))
    assert any(f.code == "duplicate-entry" for f in validate_atlas(atlas, small_registry))


def test_validate_atlas_order_independent(small_registry):
    entries = [
        HashRateEntry("A", 0.3),
        HashRateEntry("B", -0.1),
        HashRateEntry("NOPE", 0.2),
        HashRateEntry("B", 0.6, Supply.OFFGRID, Source.HYDRO),
    ]
    rng = random.Random(7)
    baseline = validate_atlas(Atlas(entries=tuple(entries)), small_registry)
    for _ in range(10):
        rng.shuffle(entries)
        assert validate_atlas(Atlas(entries=tuple(entries)), small_registry) == baseline


def test_entry_structural_validation():
    with pytest.raises(DataError):
        HashRateEntry("A", 0.1, Supply.GRID, Source.COAL)
    with pytest.raises(DataError):
        HashRateEntry("A", 0.1, Supply.OFFGRID)
    with pytest.raises(DataError):
        HashRateEntry("A", 0.1, Supply.OFFGRID, Source.SOLAR, Counterfactual.FLARED)
    # data-level violations stay constructible for validate_atlas to report
    HashRateEntry("A", -0.1)
    HashRateEntry("A", 0.1, Supply.OFFGRID, Source.METHANE)


def test_grid_mix_validation():
    GridMix("NO", {Source.HYDRO: 0.92, Source.WIND: 0.08})
    with pytest.raises(DataError, match="sum"):
        GridMix("XX", {Source.COAL: 0.7, Source.GAS: 0.4})
    with pytest.raises(DataError, match=r"out of \[0,1\]"):
        GridMix("XX", {Source.COAL: 1.2, Source.GAS: -0.2})
    with pytest.raises(DataError, match="not a grid source"):
        GridMix("XX", {Source.METHANE: 1.0})


def test_intensity_table_default_constants():
    table = IntensityTable.default()
    assert table.pog[Source.COAL] == 820 and table.lca[Source.COAL] == 820
    assert table.pog[Source.GAS] == 490 and table.pog[Source.OTHER_FOSSIL] == 700
    assert table.pog[Source.HYDRO] == 0 and table.lca[Source.HYDRO] == 24
    assert table.lca[Source.SOLAR] == 48 and table.lca[Source.WIND] == 11
    assert table.lca[Source.NUCLEAR] == 12 and table.lca[Source.OTHER_RENEWABLE] == 38
    assert table.methane_flared == -0.49
    assert table.methane_vented == -5.55


def test_region_levels():
    region = Region(id="CN-Sichuan", name="Sichuan", level=Level.CN_PROVINCE, parent="CN")
    assert region.level is Level.CN_PROVINCE
