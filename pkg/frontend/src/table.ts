// Sortable per-region results table, as plain data transforms.

import type { MapDatum, RegionInfo } from "./api";

export interface ResultRow {
  region_id: string;
  name: string;
  delta_kt: number;
  percent: number | null;
  cls: MapDatum["class"];
}

export type SortKey = "name" | "delta_kt" | "percent";

export interface SortState {
  key: SortKey;
  descending: boolean;
}

export function buildRows(map: MapDatum[], regions: Map<string, RegionInfo>): ResultRow[] {
  return map.map((d) => ({
    region_id: d.region_id,
    name: regions.get(d.region_id)?.name ?? d.region_id,
    delta_kt: d.delta_kt,
    percent: d.percent,
    cls: d.class,
  }));
}

export function sortRows(rows: ResultRow[], state: SortState): ResultRow[] {
  const sign = state.descending ? -1 : 1;
  return [...rows].sort((a, b) => {
    if (state.key === "name") return sign * a.name.localeCompare(b.name);
    const va = state.key === "delta_kt" ? a.delta_kt : (a.percent ?? 0);
    const vb = state.key === "delta_kt" ? b.delta_kt : (b.percent ?? 0);
    if (va === vb) return a.name.localeCompare(b.name);
    return sign * (va - vb);
  });
}

export function nextSort(current: SortState, clicked: SortKey): SortState {
  if (current.key === clicked) return { key: clicked, descending: !current.descending };
  return { key: clicked, descending: clicked !== "name" };
}
