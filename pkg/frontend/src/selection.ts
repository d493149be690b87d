// Region picker model: countries at the top level, US states and Chinese
// provinces nested under their parents, aggregates excluded from banning.

import type { GroupInfo, RegionInfo } from "./api";

export interface PickerGroup {
  parent: RegionInfo;
  leaves: RegionInfo[];
}

export interface PickerModel {
  countries: RegionInfo[];
  nested: PickerGroup[];
}

export function buildPickerModel(regions: RegionInfo[]): PickerModel {
  const byId = new Map(regions.map((r) => [r.id, r]));
  const leavesByParent = new Map<string, RegionInfo[]>();
  for (const region of regions) {
    if (region.parent) {
      const bucket = leavesByParent.get(region.parent) ?? [];
      bucket.push(region);
      leavesByParent.set(region.parent, bucket);
    }
  }
  const countries = regions
    .filter((r) => r.level === "country")
    .sort((a, b) => a.name.localeCompare(b.name));
  const nested: PickerGroup[] = [];
  for (const [parentId, leaves] of leavesByParent) {
    const parent = byId.get(parentId);
    if (!parent) continue;
    nested.push({
      parent,
      leaves: [...leaves].sort((a, b) => a.name.localeCompare(b.name)),
    });
  }
  nested.sort((a, b) => a.parent.name.localeCompare(b.parent.name));
  return { countries, nested };
}

export class Selection {
  private readonly chosen = new Set<string>();

  constructor(private readonly regions: Map<string, RegionInfo>) {}

  has(id: string): boolean {
    return this.chosen.has(id);
  }

  toggle(id: string): void {
    if (!this.regions.has(id)) return;
    if (this.chosen.has(id)) this.chosen.delete(id);
    else this.chosen.add(id);
  }

  /** Apply a coalition preset: select every member known to the registry. */
  applyGroup(group: GroupInfo): void {
    for (const member of group.members) {
      if (this.regions.has(member)) this.chosen.add(member);
    }
  }

  clear(): void {
    this.chosen.clear();
  }

  ids(): string[] {
    return [...this.chosen].sort();
  }

  get size(): number {
    return this.chosen.size;
  }
}
