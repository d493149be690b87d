// Choropleth model: a tile cartogram rather than geographic shapes, so the
// same renderer covers countries, US states, and Chinese provinces without
// bundling geometry. Cells join on iso_code; regions without a code (the
// rest-of-world aggregate, the "Other" residuals) go to a side list.

import type { MapDatum, RegionInfo } from "./api";

export interface MapCell {
  region_id: string;
  label: string;
  name: string;
  delta_kt: number;
  cls: MapDatum["class"];
}

export interface MapPanel {
  title: string;
  cells: MapCell[];
}

export interface MapModel {
  panels: MapPanel[];
  side: MapCell[];
}

const PANEL_TITLES: Record<string, string> = {
  country: "Countries",
  us_state: "US states",
  cn_province: "Chinese provinces",
};

export function buildMapModel(map: MapDatum[], regions: Map<string, RegionInfo>): MapModel {
  const panels = new Map<string, MapCell[]>();
  const side: MapCell[] = [];
  for (const datum of map) {
    const region = regions.get(datum.region_id);
    const cell: MapCell = {
      region_id: datum.region_id,
      label: shortLabel(datum, region),
      name: region?.name ?? datum.region_id,
      delta_kt: datum.delta_kt,
      cls: datum.class,
    };
    if (!datum.iso_code || !region || region.level === "aggregate") {
      side.push(cell);
      continue;
    }
    const bucket = panels.get(region.level) ?? [];
    bucket.push(cell);
    panels.set(region.level, bucket);
  }
  const ordered: MapPanel[] = [];
  for (const level of ["country", "us_state", "cn_province"]) {
    const cells = panels.get(level);
    if (!cells) continue;
    cells.sort((a, b) => b.delta_kt - a.delta_kt);
    ordered.push({ title: PANEL_TITLES[level] ?? level, cells });
  }
  side.sort((a, b) => b.delta_kt - a.delta_kt);
  return { panels: ordered, side };
}

function shortLabel(datum: MapDatum, region: RegionInfo | undefined): string {
  const iso = datum.iso_code ?? "";
  const tail = iso.includes("-") ? iso.split("-").pop() : iso;
  if (tail) return tail;
  return (region?.name ?? datum.region_id).slice(0, 3).toUpperCase();
}
