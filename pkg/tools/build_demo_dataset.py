#!/usr/bin/env python3
"""Build the fixture-backed demo dataset.

Inverts the ban engine against the bundled reference tables: for every
region row, pick a hash-rate share and derive the grid intensity pair that
makes a full-effectiveness ban reproduce the published delta exactly under
both bases. Aggregate rows (United States, China, European Union) become
linear constraints on their members' shares, solved with an LP; the
rest-of-world share and intensity close the global sums so the baseline
lands on the published energy and network-average intensity.

Single-region ban algebra (e = 1):   D_r = E * s_r * (I_bar - I_r) / (1 - s_r)
Coalition consistency:               sum_i D_i * (1 - s_i) = D_G * (1 - S_G)

Outputs src/leaksim/data/demo/ and verifies the result by sweeping the
built dataset against the tables it was fitted to.
"""

from __future__ import annotations

import json
import sys
from decimal import Decimal
from pathlib import Path

import numpy as np
from scipy.optimize import linprog

REPO = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(REPO / "src"))

from leaksim.dataset import load_dataset  # noqa: E402
from leaksim.ingest import parse_fixture  # noqa: E402
from leaksim.report import format_2dec  # noqa: E402
from leaksim.scenario import sweep_single_bans  # noqa: E402

FIXTURES = REPO / "src" / "leaksim" / "data" / "fixtures"
OUT = REPO / "src" / "leaksim" / "data" / "demo"

ENERGY_TWH = 148.12          # published annual energy
MEAN_POG = 301.8             # implied network-average POG intensity, g/kWh
MEAN_LCA = 313.8             # chosen LCA average: +12 g/kWh world gap
INTENSITY_FLOOR = -5.55      # methane-vented credit is the lowest intensity
INTENSITY_CAP = 820.0        # pure coal is the highest
GAP_MAX = 48.0               # largest LCA-POG source gap (solar)

COUNTRY_ISO = {
    "Canada": "CA", "Paraguay": "PY", "Singapore": "SG", "El Salvador": "SV",
    "Norway": "NO", "Sweden": "SE", "Bhutan": "BT", "Brazil": "BR",
    "France": "FR", "Iceland": "IS", "Georgia": "GE", "Venezuela": "VE",
    "United Kingdom": "GB", "Ireland": "IE", "Ukraine": "UA", "Switzerland": "CH",
    "Romania": "RO", "Netherlands": "NL", "Finland": "FI", "Spain": "ES",
    "Tajikistan": "TJ", "Hungary": "HU", "Uruguay": "UY", "Belgium": "BE",
    "Laos": "LA", "Austria": "AT", "Portugal": "PT", "Albania": "AL",
    "Angola": "AO", "Colombia": "CO", "Croatia": "HR", "Armenia": "AM",
    "New Zealand": "NZ", "Denmark": "DK", "Costa Rica": "CR", "Latvia": "LV",
    "Luxembourg": "LU", "Greece": "GR", "Bulgaria": "BG", "Ecuador": "EC",
    "Slovenia": "SI", "Guatemala": "GT", "Kyrgyzstan": "KG", "Panama": "PA",
    "Lithuania": "LT", "Afghanistan": "AF", "Cameroon": "CM", "Kenya": "KE",
    "Slovakia": "SK", "Myanmar": "MM", "Honduras": "HN", "Monaco": "MC",
    "Sudan": "SD", "Peru": "PE", "Zimbabwe": "ZW", "Bahamas": "BS",
    "Pakistan": "PK", "Ghana": "GH", "Cambodia": "KH", "Puerto Rico": "PR",
    "Chile": "CL", "Qatar": "QA", "Bolivia": "BO", "Trinidad and Tobago": "TT",
    "Moldova": "MD", "Algeria": "DZ", "Philippines": "PH", "Israel": "IL",
    "Sri Lanka": "LK", "Nigeria": "NG", "Turkmenistan": "TM", "Iraq": "IQ",
    "Maldives": "MV", "Czechia": "CZ", "Cyprus": "CY",
    "Bosnia and Herzegovina": "BA", "Seychelles": "SC", "Italy": "IT",
    "Lebanon": "LB", "Morocco": "MA", "Taiwan": "TW", "North Macedonia": "MK",
    "Argentina": "AR", "United Arab Emirates": "AE", "Bahrain": "BH",
    "Bangladesh": "BD", "Azerbaijan": "AZ", "Saudi Arabia": "SA",
    "Dominican Republic": "DO", "Belarus": "BY", "Oman": "OM", "Brunei": "BN",
    "Egypt": "EG", "Estonia": "EE", "Ethiopia": "ET", "Turkey": "TR",
    "Kosovo": "XK", "South Africa": "ZA", "Poland": "PL", "Vietnam": "VN",
    "Serbia": "RS", "South Korea": "KR", "Uzbekistan": "UZ", "India": "IN",
    "Mexico": "MX", "Kuwait": "KW", "Mongolia": "MN", "Iran": "IR",
    "Japan": "JP", "Libya": "LY", "Germany": "DE", "Australia": "AU",
    "Indonesia": "ID", "Hong Kong": "HK", "Thailand": "TH", "Russia": "RU",
    "Malaysia": "MY", "China": "CN", "Kazakhstan": "KZ",
}

US_STATE_CODE = {
    "New York": "NY", "Texas": "TX", "California": "CA", "Washington": "WA",
    "Pennsylvania": "PA", "South Dakota": "SD", "Illinois": "IL",
    "Louisiana": "LA", "North Carolina": "NC", "Oklahoma": "OK",
    "South Carolina": "SC", "Virginia": "VA", "Idaho": "ID", "Iowa": "IA",
    "Oregon": "OR", "New Jersey": "NJ", "Tennessee": "TN", "Maine": "ME",
    "Maryland": "MD", "Wisconsin": "WI", "Kansas": "KS", "Connecticut": "CT",
    "Arizona": "AZ", "Massachusetts": "MA", "Michigan": "MI",
    "Minnesota": "MN", "Nevada": "NV", "Rhode Island": "RI", "Arkansas": "AR",
    "Delaware": "DE", "Indiana": "IN", "Alabama": "AL", "Missouri": "MO",
    "Utah": "UT", "Florida": "FL", "Ohio": "OH", "North Dakota": "ND",
    "Wyoming": "WY", "Colorado": "CO", "Nebraska": "NE", "Georgia": "GA",
    "Kentucky": "KY",
}

EU_MEMBERS = [
    "AT", "BE", "BG", "HR", "CY", "CZ", "DK", "EE", "FI", "FR", "DE", "GR",
    "HU", "IE", "IT", "LV", "LT", "LU", "MT", "NL", "PL", "PT", "RO", "SK",
    "SI", "ES", "SE",
]


class Leaf:
    def __init__(self, region_id, name, level, parent, iso, d_pog, d_lca):
        self.region_id = region_id
        self.name = name
        self.level = level
        self.parent = parent
        self.iso = iso
        self.d = {"pog": d_pog, "lca": d_lca}
        self.share = None
        self.intensity = {}

    def intensity_at(self, share, basis):
        mean = MEAN_POG if basis == "pog" else MEAN_LCA
        return mean - self.d[basis] * (1.0 - share) / (ENERGY_TWH * share)

    def feasible(self, share):
        pog = self.intensity_at(share, "pog")
        lca = self.intensity_at(share, "lca")
        gap = lca - pog
        return (
            INTENSITY_FLOOR <= pog <= INTENSITY_CAP
            and INTENSITY_FLOOR <= lca <= INTENSITY_CAP
            and 0.0 <= gap <= GAP_MAX
        )

    def min_share(self):
        lo, hi = 1e-7, 1.0 - 1e-9
        if self.feasible(lo):
            return max(lo, 1e-5)
        for _ in range(80):
            mid = (lo + hi) / 2
            if self.feasible(mid):
                hi = mid
            else:
                lo = mid
        return max(hi, 1e-5)


def load_leaves():
    t1 = parse_fixture(FIXTURES / "table_I.csv", "I")
    t2 = parse_fixture(FIXTURES / "table_II.csv", "II")
    t3 = parse_fixture(FIXTURES / "table_III.csv", "III")

    leaves: list[Leaf] = []
    aggregates = {}
    for row in t1.rows:
        (name,) = row.labels
        d_lca, d_pog = float(row.full_lca), float(row.full_pog)
        if name in ("United States", "China", "European Union"):
            aggregates["US" if name == "United States" else "CN" if name == "China" else "EU"] = {
                "lca": d_lca,
                "pog": d_pog,
            }
            continue
        iso = COUNTRY_ISO[name]
        leaves.append(Leaf(iso, name, "country", None, iso, d_pog, d_lca))
    for row in t2.rows:
        (name,) = row.labels
        rid = "US-Other" if name == "Other" else f"US-{US_STATE_CODE[name]}"
        iso = "" if name == "Other" else rid
        leaves.append(Leaf(rid, name, "us_state", "US", iso, float(row.full_pog), float(row.full_lca)))
    for row in t3.rows:
        (name,) = row.labels
        rid = "CN-Other" if name == "Other" else "CN-" + name.replace(" ", "-")
        leaves.append(Leaf(rid, name, "cn_province", "CN", "" if name == "Other" else rid,
                           float(row.full_pog), float(row.full_lca)))
    return leaves, aggregates


def solve_group_shares(members: list[Leaf], targets, share_sum: float | None, cap: float):
    """LP: minimal total share subject to aggregate-row consistency.

    Constraint per basis: sum_i (D_G - D_i) s_i = D_G - sum_i D_i.
    """
    lb = np.array([leaf.min_share() * 1.02 for leaf in members])
    ub = np.full(len(members), cap)
    a_eq, b_eq = [], []
    for basis in ("pog", "lca"):
        d_g = targets[basis]
        d_i = np.array([leaf.d[basis] for leaf in members])
        a_eq.append(d_g - d_i)
        b_eq.append(d_g - d_i.sum())
    if share_sum is not None:
        a_eq.append(np.ones(len(members)))
        b_eq.append(share_sum)
    res = linprog(
        c=np.ones(len(members)),
        A_eq=np.vstack(a_eq),
        b_eq=np.array(b_eq),
        bounds=list(zip(lb, ub)),
        method="highs",
    )
    if not res.success:
        raise SystemExit(f"LP infeasible for group (sum={share_sum}): {res.message}")
    return res.x


def fit_shares(leaves: list[Leaf], aggregates) -> None:
    by_parent: dict[str | None, list[Leaf]] = {}
    for leaf in leaves:
        by_parent.setdefault(leaf.parent, []).append(leaf)

    us_members = by_parent["US"]
    cn_members = by_parent["CN"]
    eu_isos = set(EU_MEMBERS)
    eu_members = [leaf for leaf in by_parent[None] if leaf.region_id in eu_isos]
    plain = [leaf for leaf in by_parent[None] if leaf.region_id not in eu_isos]

    for members, targets, cap in (
        (us_members, aggregates["US"], 0.12),
        (cn_members, aggregates["CN"], 0.12),
        (eu_members, aggregates["EU"], 0.05),
    ):
        shares = solve_group_shares(members, targets, None, cap)
        for leaf, share in zip(members, shares):
            leaf.share = float(share)

    for leaf in plain:
        leaf.share = leaf.min_share() * 1.05

    for leaf in leaves:
        for basis in ("pog", "lca"):
            leaf.intensity[basis] = leaf.intensity_at(leaf.share, basis)
        assert leaf.feasible(leaf.share), (leaf.region_id, leaf.share, leaf.intensity)


def close_with_row(leaves: list[Leaf]):
    total = sum(leaf.share for leaf in leaves)
    row_share = 1.0 - total
    if row_share <= 0.01:
        raise SystemExit(f"leaf shares absorb {total:.4f}; no room for a rest-of-world share")
    row_intensity = {}
    for basis, mean in (("pog", MEAN_POG), ("lca", MEAN_LCA)):
        weighted = sum(leaf.share * leaf.intensity[basis] for leaf in leaves)
        row_intensity[basis] = (mean - weighted) / row_share
    pog, lca = row_intensity["pog"], row_intensity["lca"]
    if not (0 <= pog <= INTENSITY_CAP and 0 <= lca <= INTENSITY_CAP and 0 <= lca - pog <= GAP_MAX):
        raise SystemExit(f"rest-of-world closure out of range: pog={pog:.2f} lca={lca:.2f}")
    return row_share, row_intensity


def emit(leaves: list[Leaf], row_share: float, row_intensity) -> None:
    OUT.mkdir(parents=True, exist_ok=True)

    lines = ["id,name,level,parent,iso_code"]
    lines.append("US,United States,country,,US")
    lines.append("CN,China,country,,CN")
    for leaf in leaves:
        lines.append(f"{leaf.region_id},{leaf.name},{leaf.level},{leaf.parent or ''},{leaf.iso}")
    lines.append("MT,Malta,country,,MT")
    lines.append("ROW,Rest of world,aggregate,,")
    (OUT / "regions.csv").write_text("\n".join(lines) + "\n", encoding="utf-8")

    lines = ["group_id,member_region_id"]
    lines.extend(f"EU,{iso}" for iso in EU_MEMBERS)
    (OUT / "groups.csv").write_text("\n".join(lines) + "\n", encoding="utf-8")

    lines = ["region_id,intensity_pog,intensity_lca"]
    for leaf in leaves:
        lines.append(
            f"{leaf.region_id},{leaf.intensity['pog']!r},{leaf.intensity['lca']!r}"
        )
    lines.append(f"ROW,{row_intensity['pog']!r},{row_intensity['lca']!r}")
    (OUT / "direct_intensity.csv").write_text("\n".join(lines) + "\n", encoding="utf-8")

    entries = [
        {"region_id": leaf.region_id, "share": leaf.share, "supply": "grid",
         "source": None, "counterfactual": "none"}
        for leaf in leaves
    ]
    entries.append({"region_id": "ROW", "share": row_share, "supply": "grid",
                    "source": None, "counterfactual": "none"})
    (OUT / "atlas.json").write_text(
        json.dumps({"as_of": "2024-10-01", "row_region_id": "ROW", "entries": entries}, indent=2)
        + "\n",
        encoding="utf-8",
    )

    (OUT / "dataset.json").write_text(
        json.dumps(
            {
                "name": "demo",
                "as_of": "2024-10-01",
                "energy_twh": ENERGY_TWH,
                "note": "synthetic world fitted so single-ban deltas reproduce the bundled reference tables",
            },
            indent=2,
        )
        + "\n",
        encoding="utf-8",
    )


def verify() -> None:
    ds = load_dataset(OUT)
    worst_full = 0.0
    worst_label = ""
    for level, table_id in (("country", "I"), ("us_state", "II"), ("cn_province", "III")):
        fixture = parse_fixture(FIXTURES / f"table_{table_id}.csv", table_id)
        rows = sweep_single_bans(ds.atlas, ds.energy_twh, level, ds.carbon, ds.registry)
        by_label = {r.label: r for r in rows}
        by_label.update({"European Union": by_label["EU"]} if "EU" in by_label else {})
        for frow in fixture.rows:
            (label,) = frow.labels
            srow = by_label[label]
            # full columns are fitted targets: must print identically
            for got, want in ((srow.full_lca, frow.full_lca), (srow.full_pog, frow.full_pog)):
                err = abs(got - float(want))
                if err > worst_full:
                    worst_full, worst_label = err, f"{table_id}/{label}"
                assert format_2dec(got) == str(want), (table_id, label, got, want)
            # limited columns carry the source's own print rounding of
            # full/2, up to half a cent away from the engine's exact half
            for got, want in ((srow.limited_lca, frow.limited_lca), (srow.limited_pog, frow.limited_pog)):
                assert abs(got - float(want)) <= 0.0051, (table_id, label, got, want)
    print(f"max |sweep - table| over full columns of I-III: {worst_full:.3e} kt (at {worst_label})")

    kz = next(r for r in sweep_single_bans(ds.atlas, ds.energy_twh, "country", ds.carbon, ds.registry)
              if r.region_id == "KZ")
    assert format_2dec(kz.full_pog) == "-3411.55", format_2dec(kz.full_pog)
    print(f"KZ full POG prints as {format_2dec(kz.full_pog)}; dataset OK")


def main() -> None:
    leaves, aggregates = load_leaves()
    fit_shares(leaves, aggregates)
    row_share, row_intensity = close_with_row(leaves)
    total_share = sum(leaf.share for leaf in leaves) + row_share
    print(f"{len(leaves)} fitted regions, ROW share {row_share:.4f}, total {total_share:.12f}")
    print(f"ROW intensity pog={row_intensity['pog']:.2f} lca={row_intensity['lca']:.2f}")
    emit(leaves, row_share, row_intensity)
    verify()


if __name__ == "__main__":
    main()
