"""Stateless HTTP API over one immutable dataset snapshot.

The app is built around a dataset loaded once at startup; every request is
a pure function of that snapshot, so identical scenario requests always
yield identical responses and concurrent requests cannot interfere.
"""

from __future__ import annotations

from pathlib import Path

from fastapi import FastAPI, HTTPException, Request
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, Field, ValidationError

from .carbon import baseline_emissions
from .cli import scenario_payload
from .dataset import Dataset
from .model import Basis, DataError
from .scenario import NoDestinationError, Scenario, resolve_group


class ScenarioRequest(BaseModel):
    regions: list[str] = Field(default_factory=list)
    effectiveness: float
    basis: str = "pog"
    group: str | None = None
    suppression_months: float = 1.0


def create_app(dataset: Dataset, ui_dir: str | Path | None = None) -> FastAPI:
    app = FastAPI(title="leaksim", version="0.1.0")

    @app.get("/api/regions")
    def regions():
        return [
            {
                "id": r.id,
                "name": r.name,
                "level": r.level.value,
                "parent": r.parent,
                "iso_code": r.iso_code,
            }
            for r in dataset.registry
        ]

    @app.get("/api/groups")
    def groups():
        return [
            {"id": group_id, "members": sorted(members)}
            for group_id, members in sorted(dataset.registry.groups.items())
        ]

    @app.get("/api/baseline")
    def baseline(basis: str = "pog"):
        try:
            parsed = Basis(basis)
        except ValueError:
            raise HTTPException(status_code=400, detail=f"unknown basis {basis!r}") from None
        ledger = baseline_emissions(dataset.atlas, dataset.energy_twh, parsed, dataset.carbon)
        return {
            "basis": ledger.basis.value,
            "energy_twh": ledger.energy_twh,
            "total_kt": ledger.total_kt,
            "per_region": {r: ledger.per_region[r] for r in sorted(ledger.per_region)},
        }

    @app.post("/api/scenario")
    async def scenario(request: Request):
        try:
            body = ScenarioRequest.model_validate(await request.json())
        except (ValidationError, ValueError) as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from None

        banned = set(body.regions)
        try:
            basis = Basis(body.basis)
            if body.group:
                banned |= set(resolve_group(body.group, dataset.registry))
            if not banned:
                raise DataError("no regions to ban")
            if not 0.0 <= body.effectiveness <= 1.0:
                raise DataError(f"effectiveness {body.effectiveness} outside [0, 1]")
            if body.suppression_months < 0:
                raise DataError("suppression_months cannot be negative")
            plan = Scenario(
                banned_regions=frozenset(banned),
                effectiveness=body.effectiveness,
                basis=basis,
                suppression_months=body.suppression_months,
            )
            payload = scenario_payload(dataset, plan)
        except NoDestinationError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from None
        except (DataError, ValueError) as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from None
        return JSONResponse(payload)

    ui_root = Path(ui_dir) if ui_dir else _default_ui_dir()
    if ui_root is not None and ui_root.is_dir():
        app.mount("/", StaticFiles(directory=ui_root, html=True), name="ui")
    else:

        @app.get("/")
        def index():
            return JSONResponse(
                {
                    "name": "leaksim",
                    "note": "UI assets not built; API under /api/",
                    "endpoints": ["/api/regions", "/api/groups", "/api/baseline", "/api/scenario"],
                }
            )

    return app


def _default_ui_dir() -> Path | None:
    bundled = Path(__file__).parent / "ui"
    if bundled.is_dir():
        return bundled
    repo_dist = Path(__file__).resolve().parents[2] / "frontend" / "dist"
    if repo_dist.is_dir():
        return repo_dist
    return None
