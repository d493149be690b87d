"""Command-line interface.

Dataset-consuming commands (baseline, ban, sweep, serve) read one data
directory, chosen by --data-dir, the LEAKSIM_DATA environment variable, or
the bundled demo dataset, in that order. Diagnostics go to stderr, data to
stdout or --out; data errors exit 1, usage errors exit 2.
"""

from __future__ import annotations

import json
import logging
import sys
from importlib import resources
from pathlib import Path

import click

from . import atlas as atlas_mod
from . import ingest
from .carbon import baseline_emissions
from .dataset import Dataset, build_atlas_from_raw, load_dataset
from .model import Basis, LeaksimError, validate_atlas
from .power import estimate_power
from .report import emit_map_data, emit_table, sweep_rows_as_mappings, SWEEP_COLUMNS
from .scenario import Scenario, evaluate, resolve_group, sweep_single_bans

log = logging.getLogger("leaksim")


def bundled_data(*parts: str) -> Path:
    return Path(resources.files("leaksim").joinpath("data", *parts))


def _resolve_data_dir(data_dir: str | None) -> Path:
    if data_dir:
        return Path(data_dir)
    import os

    env = os.environ.get("LEAKSIM_DATA")
    if env:
        return Path(env)
    return bundled_data("demo")


def _load(data_dir: str | None, intensity_table: str | None = None) -> Dataset:
    ds = load_dataset(_resolve_data_dir(data_dir))
    if intensity_table:
        from dataclasses import replace

        table = ingest.load_intensity_table(intensity_table)
        ds = replace(ds, carbon=ds.carbon.with_table(table))
    return ds


def scenario_payload(dataset: Dataset, scenario: Scenario) -> dict:
    """The one result shape shared by the CLI and the HTTP API."""
    result = evaluate(dataset.atlas, dataset.energy_twh, scenario, dataset.carbon, dataset.registry)
    return {
        "banned_regions": sorted(scenario.banned_regions),
        "effectiveness": scenario.effectiveness,
        "basis": scenario.basis.value,
        "energy_twh": dataset.energy_twh,
        "baseline_kt": result.baseline_kt,
        "delta_kt": result.delta_kt_per_year,
        "percent": result.percent_of_baseline,
        "per_region": [
            {"region_id": r, "delta_kt": result.per_region_delta[r]}
            for r in sorted(result.per_region_delta)
        ],
        "one_off_kt": result.one_off_avoidance_kt,
        "leakage_rate": result.leakage_rate,
        "map": emit_map_data(result.per_region_delta, result.baseline_kt, dataset.registry),
    }


@click.group()
@click.option("-v", "--verbose", is_flag=True, help="Log progress to stderr.")
def main(verbose: bool) -> None:
    """Quantify the global carbon effect of PoW mining bans."""
    logging.basicConfig(
        stream=sys.stderr,
        level=logging.INFO if verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )


@main.command("ingest")
@click.option("--regions", "regions_file", required=True, type=click.Path(exists=True))
@click.option("--snapshot", required=True, type=click.Path(exists=True))
@click.option("--grid-mix", "grid_mix_dir", required=True, type=click.Path(exists=True, file_okay=False))
@click.option("--facilities", type=click.Path(exists=True))
@click.option("--equipment", required=True, type=click.Path(exists=True))
@click.option("--params", required=True, type=click.Path(exists=True))
@click.option("--leaf-weights", "leaf_weights_file", type=click.Path(exists=True))
@click.option("--as-of", type=click.DateTime(formats=["%Y-%m-%d"]))
@click.option("--out", required=True, type=click.Path())
def ingest_cmd(regions_file, snapshot, grid_mix_dir, facilities, equipment, params, leaf_weights_file, as_of, out):
    """Build atlas.json from the raw datasets."""
    registry = _build_registry_from(regions_file)
    network = ingest.parse_network_params(params)
    power = estimate_power(network, ingest.parse_equipment(equipment))

    shares = ingest.parse_hashrate_snapshot(snapshot)
    adjusted = atlas_mod.apply_post_cbeci_adjustments(shares)
    facility_rows = ingest.parse_facilities(facilities) if facilities else []
    built = atlas_mod.merge_facilities(
        adjusted,
        facility_rows,
        power,
        network.hashrate_ths,
        registry,
        as_of=as_of.date() if as_of else None,
        row_region_id=next((r.id for r in registry.aggregates()), "ROW"),
    )
    if leaf_weights_file:
        for country_id, weights in sorted(ingest.parse_leaf_weights(leaf_weights_file).items()):
            built = atlas_mod.distribute_national_to_leaves(built, country_id, weights, registry)

    report = validate_atlas(built, registry)
    for finding in report:
        log.warning("atlas validation: %s (%s)", finding.message, finding.region_id or "-")
    if not report.ok:
        raise LeaksimError(f"built atlas failed validation with {len(report)} finding(s)")

    _check_intensity_coverage(built, Path(grid_mix_dir))
    atlas_mod.save_atlas(built, out)
    click.echo(f"wrote {out} ({len(built.entries)} entries, share sum {built.total_share():.9f})", err=True)


def _build_registry_from(regions_file: str):
    from .model import build_registry

    return build_registry(ingest.parse_regions(regions_file))


def _check_intensity_coverage(built, grid_mix_dir: Path) -> None:
    from .dataset import GRID_MIX_FILES
    from .model import Supply

    mixes, direct = [], []
    for filename, schema in GRID_MIX_FILES.items():
        path = grid_mix_dir / filename
        if path.exists():
            m, d = ingest.parse_grid_mix(path, schema)
            mixes.extend(m)
            direct.extend(d)
    covered = {m.region_id for m in mixes} | {d.region_id for d in direct}
    grid_regions = {e.region_id for e in built.entries if e.supply is Supply.GRID}
    missing = sorted(grid_regions - covered - {built.row_region_id})
    if missing:
        log.warning("no grid intensity data for: %s", ", ".join(missing))


@main.command()
@click.option("--params", required=True, type=click.Path(exists=True))
@click.option("--equipment", required=True, type=click.Path(exists=True))
def power(params, equipment):
    """Estimate network power draw and annual energy."""
    est = estimate_power(ingest.parse_network_params(params), ingest.parse_equipment(equipment))
    click.echo(
        json.dumps(
            {
                "lower_gw": est.lower_gw,
                "best_gw": est.best_gw,
                "upper_gw": est.upper_gw,
                "annual_twh": est.annual_twh,
                "profitable_models": list(est.profitable_models),
            },
            indent=2,
        )
    )


@main.command()
@click.option("--basis", type=click.Choice(["pog", "lca"]), default="pog", show_default=True)
@click.option("--data-dir", type=click.Path(exists=True, file_okay=False))
@click.option("--intensity-table", type=click.Path(exists=True), help="Override the bundled source intensity table.")
def baseline(basis, data_dir, intensity_table):
    """Pre-ban annual emissions ledger."""
    ds = _load(data_dir, intensity_table)
    ledger = baseline_emissions(ds.atlas, ds.energy_twh, Basis(basis), ds.carbon)
    click.echo(
        json.dumps(
            {
                "basis": ledger.basis.value,
                "energy_twh": ledger.energy_twh,
                "total_kt": ledger.total_kt,
                "per_region": {r: ledger.per_region[r] for r in sorted(ledger.per_region)},
            },
            indent=2,
        )
    )


@main.command()
@click.option("--regions", default="", help="Comma-separated region ids to ban.")
@click.option("--effectiveness", type=click.FloatRange(0.0, 1.0), default=1.0, show_default=True)
@click.option("--basis", type=click.Choice(["pog", "lca"]), default="pog", show_default=True)
@click.option("--group", "group_id", help="Ban a named coalition (e.g. EU) instead of a region list.")
@click.option("--suppression-months", type=click.FloatRange(min=0.0), default=1.0, show_default=True)
@click.option("--json", "fmt", flag_value="json", default=True, help="JSON output (default).")
@click.option("--csv", "fmt", flag_value="csv", help="CSV per-region delta table.")
@click.option("--data-dir", type=click.Path(exists=True, file_okay=False))
@click.option("--intensity-table", type=click.Path(exists=True), help="Override the bundled source intensity table.")
@click.option("--out", type=click.Path(), help="Write output here instead of stdout.")
def ban(regions, effectiveness, basis, group_id, suppression_months, fmt, data_dir, intensity_table, out):
    """Evaluate a mining ban under current-proportion redistribution."""
    ds = _load(data_dir, intensity_table)
    banned = {r.strip() for r in regions.split(",") if r.strip()}
    if group_id:
        banned |= set(resolve_group(group_id, ds.registry))
    if not banned:
        raise click.UsageError("nothing to ban: give --regions and/or --group")
    scenario = Scenario(
        banned_regions=frozenset(banned),
        effectiveness=effectiveness,
        basis=Basis(basis),
        suppression_months=suppression_months,
    )
    payload = scenario_payload(ds, scenario)
    if fmt == "csv":
        rows = [{"Region": p["region_id"], "Delta_kt": p["delta_kt"]} for p in payload["per_region"]]
        data = emit_table(rows, "csv", ("Region", "Delta_kt"))
    else:
        data = (json.dumps(payload, indent=2) + "\n").encode("utf-8")
    _write_output(data, out)


@main.command()
@click.option(
    "--level",
    type=click.Choice(["country", "us-state", "cn-province"]),
    default="country",
    show_default=True,
)
@click.option("--basis", type=click.Choice(["pog", "lca"]), help="Unused; sweeps report both bases.", hidden=True)
@click.option("--json", "fmt", flag_value="json", help="JSON output.")
@click.option("--csv", "fmt", flag_value="csv", default=True, help="CSV output (default).")
@click.option("--data-dir", type=click.Path(exists=True, file_okay=False))
@click.option("--intensity-table", type=click.Path(exists=True), help="Override the bundled source intensity table.")
@click.option("--out", type=click.Path())
def sweep(level, basis, fmt, data_dir, intensity_table, out):
    """Ban every region at a level in turn; emit the four-column table."""
    ds = _load(data_dir, intensity_table)
    rows = sweep_single_bans(
        ds.atlas, ds.energy_twh, level.replace("-", "_"), ds.carbon, ds.registry
    )
    data = emit_table(sweep_rows_as_mappings(rows), fmt or "csv", SWEEP_COLUMNS)
    _write_output(data, out)


@main.command("check-fixtures")
@click.option(
    "--dir",
    "fixtures_dir",
    type=click.Path(exists=True, file_okay=False),
    default=None,
    help="Directory holding table_{I,II,III,IV}.csv (default: bundled).",
)
def check_fixtures_cmd(fixtures_dir):
    """Verify the transcribed reference tables' internal consistency."""
    from .report import check_fixtures

    root = Path(fixtures_dir) if fixtures_dir else bundled_data("fixtures")
    fixtures = []
    for table_id in ("I", "II", "III", "IV"):
        path = root / f"table_{table_id}.csv"
        if path.exists():
            fixtures.append(ingest.parse_fixture(path, table_id))
    if not fixtures:
        raise LeaksimError(f"no fixture tables found under {root}")
    findings = check_fixtures(fixtures)
    for f in findings:
        click.echo(f"table {f.table_id} / {f.row_label}: {f.message}", err=True)
    click.echo(f"{len(findings)} violations in {len(fixtures)} tables")
    if findings:
        sys.exit(1)


@main.command()
@click.option("--port", type=int, default=8000, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--data-dir", type=click.Path(exists=True, file_okay=False))
def serve(port, host, data_dir):
    """Serve the HTTP API and the bundled UI."""
    import uvicorn

    from .server import create_app

    app = create_app(_load(data_dir))
    uvicorn.run(app, host=host, port=port, log_level="info")


def _write_output(data: bytes, out: str | None) -> None:
    if out:
        Path(out).write_bytes(data)
        click.echo(f"wrote {out}", err=True)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()


def run_cli(argv: list[str] | None = None) -> int:
    """Invoke the CLI programmatically; returns the exit code."""
    try:
        main.main(args=argv, standalone_mode=False)
        return 0
    except click.UsageError as exc:
        exc.show()
        return 2
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except SystemExit as exc:
        return int(exc.code or 0)
    except LeaksimError as exc:
        click.echo(f"error: {exc}", err=True)
        return 1


def entrypoint() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    entrypoint()
