from __future__ import annotations

import random
from pathlib import Path

import pytest

from leaksim.carbon import CarbonModel
from leaksim.dataset import load_dataset
from leaksim.model import (
    Atlas,
    Counterfactual,
    DirectIntensity,
    HashRateEntry,
    IntensityTable,
    Level,
    Region,
    RegionRegistry,
    Source,
    Supply,
)

DATA_DIR = Path(__file__).resolve().parents[1] / "src" / "leaksim" / "data"


@pytest.fixture(scope="session")
def data_dir() -> Path:
    return DATA_DIR


@pytest.fixture(scope="session")
def toy():
    return load_dataset(DATA_DIR / "toy")


@pytest.fixture()
def toy_scenario_parts(toy):
    return toy.atlas, toy.energy_twh, toy.carbon, toy.registry


def write_csv(path: Path, text: str) -> Path:
    path.write_text(text.strip() + "\n", encoding="utf-8")
    return path


# Off-grid sources the random-instance generator may attach to entries,
# with their table intensities per basis (pog, lca).
OFFGRID_CHOICES = [
    (Source.SOLAR, Counterfactual.NONE, 0.0, 48.0),
    (Source.WIND, Counterfactual.NONE, 0.0, 11.0),
    (Source.HYDRO, Counterfactual.NONE, 0.0, 24.0),
    (Source.COAL, Counterfactual.NONE, 820.0, 820.0),
    (Source.GAS, Counterfactual.NONE, 490.0, 490.0),
    (Source.METHANE, Counterfactual.FLARED, -0.49, -0.49),
    (Source.METHANE, Counterfactual.VENTED, -5.55, -5.55),
]


def random_instance(rng: random.Random, max_entries: int = 200, basis_name: str = "pog"):
    """A randomized atlas plus an intensity map the oracle can trust.

    Returns (atlas, carbon_model, registry, intensity_of) where intensity_of
    maps each entry to the g/kWh value the generator intended, computed
    without going through CarbonModel.
    """
    n_regions = rng.randint(2, 12)
    region_ids = [f"R{i}" for i in range(n_regions)]
    regions = [Region(id=r, name=r) for r in region_ids]
    regions.append(Region(id="ROW", name="Rest", level=Level.AGGREGATE))
    registry = RegionRegistry(regions)

    direct = [
        DirectIntensity(region_id=r, intensity_pog=rng.uniform(0, 820), intensity_lca=rng.uniform(0, 820))
        for r in region_ids
    ]
    grid_intensity = {
        d.region_id: d.intensity_pog if basis_name == "pog" else d.intensity_lca for d in direct
    }
    carbon = CarbonModel(mixes=(), direct=direct, table=IntensityTable.default())

    n_entries = rng.randint(2, max_entries)
    raw = [rng.random() for _ in range(n_entries)]
    total = sum(raw)
    entries = []
    intensity_of = {}
    for w in raw:
        region_id = rng.choice(region_ids)
        share = w / total
        if rng.random() < 0.35:
            source, cf, pog_i, lca_i = rng.choice(OFFGRID_CHOICES)
            entry = HashRateEntry(
                region_id=region_id, share=share, supply=Supply.OFFGRID, source=source, counterfactual=cf
            )
            intensity = pog_i if basis_name == "pog" else lca_i
        else:
            entry = HashRateEntry(region_id=region_id, share=share)
            intensity = grid_intensity[region_id]
        entries.append(entry)
        intensity_of[id(entry)] = intensity

    atlas = Atlas(entries=tuple(entries), as_of="test", row_region_id="ROW")
    return atlas, carbon, registry, intensity_of
