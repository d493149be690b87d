// Wiring: load the world once, then evaluate ban scenarios as the analyst
// drives the controls. Every displayed number is a response field run
// through the fixed formatters; nothing is recomputed client-side.

import { ApiError, Client, isAbort } from "./api";
import type { GroupInfo, RegionInfo, ScenarioResponse } from "./api";
import { CLASS_LABEL, formatKt, formatLeakage, formatPercent, formatSigned, headlineClass } from "./format";
import { buildMapModel } from "./map";
import { Selection, buildPickerModel } from "./selection";
import { ResultRow, SortState, buildRows, nextSort, sortRows } from "./table";

const client = new Client();

interface AppState {
  regions: Map<string, RegionInfo>;
  groups: GroupInfo[];
  selection: Selection;
  effectiveness: number;
  basis: "pog" | "lca";
  result: ScenarioResponse | null;
  rows: ResultRow[];
  sort: SortState;
}

let state: AppState;

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
}

async function loadWorld(): Promise<void> {
  try {
    const [regions, groups, baselinePog, baselineLca] = await Promise.all([
      client.regions(),
      client.groups(),
      client.baseline("pog"),
      client.baseline("lca"),
    ]);
    state = {
      regions: new Map(regions.map((r) => [r.id, r])),
      groups,
      selection: new Selection(new Map(regions.filter((r) => r.level !== "aggregate").map((r) => [r.id, r]))),
      effectiveness: 1.0,
      basis: "pog",
      result: null,
      rows: [],
      sort: { key: "delta_kt", descending: true },
    };
    el<HTMLElement>("baseline-summary").textContent =
      `Baseline: ${formatKt(baselinePog.total_kt)} kt/yr POG, ` +
      `${formatKt(baselineLca.total_kt)} kt/yr LCA at ${formatKt(baselinePog.energy_twh)} TWh`;
    renderPicker(regions);
    renderPresets(groups);
    bindControls();
    setControlsEnabled(true);
  } catch (err) {
    showBanner(`Cannot reach the simulator API: ${message(err)}. Start the server and reload.`);
    setControlsEnabled(false);
  }
}

function renderPicker(regions: RegionInfo[]): void {
  const model = buildPickerModel(regions);
  const container = el<HTMLElement>("picker");
  container.replaceChildren();
  const nestedParents = new Set(model.nested.map((g) => g.parent.id));

  const countryList = document.createElement("div");
  countryList.className = "picker-column";
  for (const country of model.countries) {
    countryList.append(checkbox(country.id, country.name, nestedParents.has(country.id)));
  }
  container.append(countryList);

  for (const group of model.nested) {
    const column = document.createElement("div");
    column.className = "picker-column";
    const heading = document.createElement("h3");
    heading.textContent = `${group.parent.name} (state/province level)`;
    column.append(heading);
    for (const leaf of group.leaves) {
      column.append(checkbox(leaf.id, leaf.name, false));
    }
    container.append(column);
  }
}

function checkbox(id: string, label: string, isParent: boolean): HTMLLabelElement {
  const wrapper = document.createElement("label");
  wrapper.className = "pick";
  const box = document.createElement("input");
  box.type = "checkbox";
  box.dataset.region = id;
  box.addEventListener("change", () => {
    state.selection.toggle(id);
    updateSelectionSummary();
  });
  wrapper.append(box, document.createTextNode(label + (isParent ? " (all states/provinces)" : "")));
  return wrapper;
}

function renderPresets(groups: GroupInfo[]): void {
  const holder = el<HTMLElement>("presets");
  holder.replaceChildren();
  for (const group of groups) {
    const button = document.createElement("button");
    button.type = "button";
    button.textContent = `${group.id} coalition`;
    button.addEventListener("click", () => {
      state.selection.applyGroup(group);
      syncCheckboxes();
      updateSelectionSummary();
    });
    holder.append(button);
  }
}

function syncCheckboxes(): void {
  document.querySelectorAll<HTMLInputElement>("input[data-region]").forEach((box) => {
    box.checked = state.selection.has(box.dataset.region ?? "");
  });
}

function updateSelectionSummary(): void {
  el<HTMLElement>("selection-summary").textContent =
    state.selection.size === 0
      ? "No jurisdictions selected"
      : `${state.selection.size} jurisdiction(s): ${state.selection.ids().join(", ")}`;
}

function bindControls(): void {
  const slider = el<HTMLInputElement>("effectiveness");
  slider.addEventListener("input", () => {
    state.effectiveness = Number(slider.value);
    el<HTMLElement>("effectiveness-label").textContent = effectivenessLabel(state.effectiveness);
  });
  for (const radio of document.querySelectorAll<HTMLInputElement>("input[name=basis]")) {
    radio.addEventListener("change", () => {
      if (!radio.checked) return;
      state.basis = radio.value as "pog" | "lca";
      // basis changes re-query; the server is stateless, so toggling back
      // restores the previous headline exactly
      if (state.result) void submit();
    });
  }
  el<HTMLButtonElement>("evaluate").addEventListener("click", () => void submit());
  el<HTMLButtonElement>("clear").addEventListener("click", () => {
    state.selection.clear();
    syncCheckboxes();
    updateSelectionSummary();
  });
}

function effectivenessLabel(e: number): string {
  if (e === 1) return "1.00 (full ban)";
  if (e === 0.5) return "0.50 (limited, half the activity driven out)";
  return e.toFixed(2);
}

async function submit(): Promise<void> {
  hideBanner();
  if (state.selection.size === 0) {
    showInline("Select at least one jurisdiction to ban.");
    return;
  }
  try {
    const result = await client.scenario({
      regions: state.selection.ids(),
      effectiveness: state.effectiveness,
      basis: state.basis,
    });
    state.result = result;
    state.rows = buildRows(result.map, state.regions);
    renderResult(result, state.regions, state.rows, state.sort);
  } catch (err) {
    if (isAbort(err)) return; // superseded by a newer submission
    if (err instanceof ApiError) {
      showInline(`Scenario rejected (${err.status}): ${err.message}`);
      return; // selection and previous result stay on screen
    }
    showInline(`Request failed: ${message(err)}`);
  }
}

export function renderResult(
  result: ScenarioResponse,
  regions: Map<string, RegionInfo>,
  rows: ResultRow[],
  sort: SortState,
  root: Document = document,
): void {
  const headline = root.getElementById("headline");
  if (!headline) return;
  const cls = headlineClass(result.delta_kt);
  headline.className = `headline ${cls}`;
  setText(root, "delta-value", `${formatSigned(result.delta_kt)} kt CO2eq/yr`);
  setText(root, "delta-percent", `${formatPercent(result.percent)} of the pre-ban baseline`);
  setText(root, "delta-class", CLASS_LABEL[cls]);
  setText(root, "one-off", `${formatKt(result.one_off_kt)} kt`);
  setText(root, "leakage", formatLeakage(result.leakage_rate));
  setText(
    root,
    "leakage-note",
    result.leakage_rate !== null && result.leakage_rate > 1
      ? "rate above 1: the ban backfires"
      : "a rate above 1 would mean the ban backfires",
  );
  setText(
    root,
    "scenario-recap",
    `Banned ${result.banned_regions.join(", ")} at effectiveness ${result.effectiveness}, ` +
      `${result.basis.toUpperCase()} basis, ${formatKt(result.energy_twh)} TWh constant energy`,
  );
  renderTable(rows, sort, root);
  renderMap(result, regions, root);
  root.getElementById("results")?.removeAttribute("hidden");
}

function renderTable(rows: ResultRow[], sort: SortState, root: Document = document): void {
  const body = root.getElementById("rows");
  if (!body) return;
  body.replaceChildren();
  for (const row of sortRows(rows, sort)) {
    const tr = root.createElement("tr");
    tr.className = row.cls;
    const cells = [row.name, formatSigned(row.delta_kt), formatPercent(row.percent), row.cls];
    for (const text of cells) {
      const td = root.createElement("td");
      td.textContent = text;
      tr.append(td);
    }
    body.append(tr);
  }
}

function renderMap(
  result: ScenarioResponse,
  regions: Map<string, RegionInfo>,
  root: Document = document,
): void {
  const host = root.getElementById("map");
  if (!host) return;
  host.replaceChildren();
  const model = buildMapModel(result.map, regions);
  for (const panel of model.panels) {
    const section = root.createElement("section");
    section.className = "map-panel";
    const heading = root.createElement("h3");
    heading.textContent = panel.title;
    section.append(heading);
    const grid = root.createElement("div");
    grid.className = "map-grid";
    for (const cell of panel.cells) {
      const tile = root.createElement("div");
      tile.className = `tile ${cell.cls}`;
      tile.title = `${cell.name}: ${formatSigned(cell.delta_kt)} kt/yr`;
      tile.textContent = cell.label;
      grid.append(tile);
    }
    section.append(grid);
    host.append(section);
  }
  if (model.side.length) {
    const section = root.createElement("section");
    section.className = "map-panel";
    const heading = root.createElement("h3");
    heading.textContent = "Not mappable (no ISO code)";
    section.append(heading);
    const list = root.createElement("ul");
    list.className = "side-list";
    for (const cell of model.side) {
      const item = root.createElement("li");
      item.className = cell.cls;
      item.textContent = `${cell.name}: ${formatSigned(cell.delta_kt)} kt/yr`;
      list.append(item);
    }
    section.append(list);
    host.append(section);
  }
}

function bindTableSorting(): void {
  document.querySelectorAll<HTMLTableCellElement>("th[data-sort]").forEach((th) => {
    th.addEventListener("click", () => {
      if (!state?.result) return;
      state.sort = nextSort(state.sort, th.dataset.sort as SortState["key"]);
      renderTable(state.rows, state.sort);
    });
  });
}

function setText(root: Document, id: string, text: string): void {
  const node = root.getElementById(id);
  if (node) node.textContent = text;
}

function showBanner(text: string): void {
  const banner = el<HTMLElement>("banner");
  banner.textContent = text;
  banner.removeAttribute("hidden");
}

function hideBanner(): void {
  el<HTMLElement>("banner").setAttribute("hidden", "");
}

function showInline(text: string): void {
  const inline = el<HTMLElement>("inline-error");
  inline.textContent = text;
  inline.removeAttribute("hidden");
  window.setTimeout(() => inline.setAttribute("hidden", ""), 6000);
}

function setControlsEnabled(enabled: boolean): void {
  document.querySelectorAll<HTMLInputElement | HTMLButtonElement>("#controls input, #controls button").forEach((node) => {
    node.disabled = !enabled;
  });
}

function message(err: unknown): string {
  return err instanceof Error ? err.message : String(err);
}

if (typeof window !== "undefined" && document.getElementById("controls")) {
  bindTableSorting();
  void loadWorld();
}
