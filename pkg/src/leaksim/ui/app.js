// src/api.ts
var ApiError = class extends Error {
  constructor(status, message2) {
    super(message2);
    this.status = status;
    this.name = "ApiError";
  }
  status;
};
function isAbort(err) {
  return err instanceof DOMException && err.name === "AbortError";
}
var Client = class {
  constructor(base = "", fetchFn = (input, init) => fetch(input, init)) {
    this.base = base;
    this.fetchFn = fetchFn;
  }
  base;
  fetchFn;
  inflight = null;
  async request(path, init) {
    const response = await this.fetchFn(this.base + path, init);
    if (!response.ok) {
      let detail = response.statusText;
      try {
        const body = await response.json();
        if (body && typeof body.detail === "string") detail = body.detail;
      } catch {
      }
      throw new ApiError(response.status, detail);
    }
    return await response.json();
  }
  regions() {
    return this.request("/api/regions");
  }
  groups() {
    return this.request("/api/groups");
  }
  baseline(basis) {
    return this.request(`/api/baseline?basis=${encodeURIComponent(basis)}`);
  }
  /** Evaluate a scenario; any scenario request still in flight is aborted. */
  scenario(body) {
    this.inflight?.abort();
    const controller = new AbortController();
    this.inflight = controller;
    return this.request("/api/scenario", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
      signal: controller.signal
    }).finally(() => {
      if (this.inflight === controller) this.inflight = null;
    });
  }
};

// src/format.ts
var KT = new Intl.NumberFormat("en-US", {
  minimumFractionDigits: 2,
  maximumFractionDigits: 2
});
function formatKt(value) {
  return KT.format(value);
}
function formatPercent(value) {
  return value === null ? "n/a" : `${KT.format(value)}%`;
}
function formatLeakage(value) {
  return value === null ? "undefined" : KT.format(value);
}
function formatSigned(value) {
  return value > 0 ? `+${KT.format(value)}` : KT.format(value);
}
var CLASS_LABEL = {
  backfire: "backfires (emissions rise)",
  effective: "effective (emissions fall)",
  neutral: "neutral"
};
function headlineClass(deltaKt) {
  if (Math.abs(deltaKt) <= 5e-3) return "neutral";
  return deltaKt > 0 ? "backfire" : "effective";
}

// src/map.ts
var PANEL_TITLES = {
  country: "Countries",
  us_state: "US states",
  cn_province: "Chinese provinces"
};
function buildMapModel(map, regions) {
  const panels = /* @__PURE__ */ new Map();
  const side = [];
  for (const datum of map) {
    const region = regions.get(datum.region_id);
    const cell = {
      region_id: datum.region_id,
      label: shortLabel(datum, region),
      name: region?.name ?? datum.region_id,
      delta_kt: datum.delta_kt,
      cls: datum.class
    };
    if (!datum.iso_code || !region || region.level === "aggregate") {
      side.push(cell);
      continue;
    }
    const bucket = panels.get(region.level) ?? [];
    bucket.push(cell);
    panels.set(region.level, bucket);
  }
  const ordered = [];
  for (const level of ["country", "us_state", "cn_province"]) {
    const cells = panels.get(level);
    if (!cells) continue;
    cells.sort((a, b) => b.delta_kt - a.delta_kt);
    ordered.push({ title: PANEL_TITLES[level] ?? level, cells });
  }
  side.sort((a, b) => b.delta_kt - a.delta_kt);
  return { panels: ordered, side };
}
function shortLabel(datum, region) {
  const iso = datum.iso_code ?? "";
  const tail = iso.includes("-") ? iso.split("-").pop() : iso;
  if (tail) return tail;
  return (region?.name ?? datum.region_id).slice(0, 3).toUpperCase();
}

// src/selection.ts
function buildPickerModel(regions) {
  const byId = new Map(regions.map((r) => [r.id, r]));
  const leavesByParent = /* @__PURE__ */ new Map();
  for (const region of regions) {
    if (region.parent) {
      const bucket = leavesByParent.get(region.parent) ?? [];
      bucket.push(region);
      leavesByParent.set(region.parent, bucket);
    }
  }
  const countries = regions.filter((r) => r.level === "country").sort((a, b) => a.name.localeCompare(b.name));
  const nested = [];
  for (const [parentId, leaves] of leavesByParent) {
    const parent = byId.get(parentId);
    if (!parent) continue;
    nested.push({
      parent,
      leaves: [...leaves].sort((a, b) => a.name.localeCompare(b.name))
    });
  }
  nested.sort((a, b) => a.parent.name.localeCompare(b.parent.name));
  return { countries, nested };
}
var Selection = class {
  constructor(regions) {
    this.regions = regions;
  }
  regions;
  chosen = /* @__PURE__ */ new Set();
  has(id) {
    return this.chosen.has(id);
  }
  toggle(id) {
    if (!this.regions.has(id)) return;
    if (this.chosen.has(id)) this.chosen.delete(id);
    else this.chosen.add(id);
  }
  /** Apply a coalition preset: select every member known to the registry. */
  applyGroup(group) {
    for (const member of group.members) {
      if (this.regions.has(member)) this.chosen.add(member);
    }
  }
  clear() {
    this.chosen.clear();
  }
  ids() {
    return [...this.chosen].sort();
  }
  get size() {
    return this.chosen.size;
  }
};

// src/table.ts
function buildRows(map, regions) {
  return map.map((d) => ({
    region_id: d.region_id,
    name: regions.get(d.region_id)?.name ?? d.region_id,
    delta_kt: d.delta_kt,
    percent: d.percent,
    cls: d.class
  }));
}
function sortRows(rows, state2) {
  const sign = state2.descending ? -1 : 1;
  return [...rows].sort((a, b) => {
    if (state2.key === "name") return sign * a.name.localeCompare(b.name);
    const va = state2.key === "delta_kt" ? a.delta_kt : a.percent ?? 0;
    const vb = state2.key === "delta_kt" ? b.delta_kt : b.percent ?? 0;
    if (va === vb) return a.name.localeCompare(b.name);
    return sign * (va - vb);
  });
}
function nextSort(current, clicked) {
  if (current.key === clicked) return { key: clicked, descending: !current.descending };
  return { key: clicked, descending: clicked !== "name" };
}

// src/main.ts
var client = new Client();
var state;
function el(id) {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node;
}
async function loadWorld() {
  try {
    const [regions, groups, baselinePog, baselineLca] = await Promise.all([
      client.regions(),
      client.groups(),
      client.baseline("pog"),
      client.baseline("lca")
    ]);
    state = {
      regions: new Map(regions.map((r) => [r.id, r])),
      groups,
      selection: new Selection(new Map(regions.filter((r) => r.level !== "aggregate").map((r) => [r.id, r]))),
      effectiveness: 1,
      basis: "pog",
      result: null,
      rows: [],
      sort: { key: "delta_kt", descending: true }
    };
    el("baseline-summary").textContent = `Baseline: ${formatKt(baselinePog.total_kt)} kt/yr POG, ${formatKt(baselineLca.total_kt)} kt/yr LCA at ${formatKt(baselinePog.energy_twh)} TWh`;
    renderPicker(regions);
    renderPresets(groups);
    bindControls();
    setControlsEnabled(true);
  } catch (err) {
    showBanner(`Cannot reach the simulator API: ${message(err)}. Start the server and reload.`);
    setControlsEnabled(false);
  }
}
function renderPicker(regions) {
  const model = buildPickerModel(regions);
  const container = el("picker");
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
function checkbox(id, label, isParent) {
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
function renderPresets(groups) {
  const holder = el("presets");
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
function syncCheckboxes() {
  document.querySelectorAll("input[data-region]").forEach((box) => {
    box.checked = state.selection.has(box.dataset.region ?? "");
  });
}
function updateSelectionSummary() {
  el("selection-summary").textContent = state.selection.size === 0 ? "No jurisdictions selected" : `${state.selection.size} jurisdiction(s): ${state.selection.ids().join(", ")}`;
}
function bindControls() {
  const slider = el("effectiveness");
  slider.addEventListener("input", () => {
    state.effectiveness = Number(slider.value);
    el("effectiveness-label").textContent = effectivenessLabel(state.effectiveness);
  });
  for (const radio of document.querySelectorAll("input[name=basis]")) {
    radio.addEventListener("change", () => {
      if (!radio.checked) return;
      state.basis = radio.value;
      if (state.result) void submit();
    });
  }
  el("evaluate").addEventListener("click", () => void submit());
  el("clear").addEventListener("click", () => {
    state.selection.clear();
    syncCheckboxes();
    updateSelectionSummary();
  });
}
function effectivenessLabel(e) {
  if (e === 1) return "1.00 (full ban)";
  if (e === 0.5) return "0.50 (limited, half the activity driven out)";
  return e.toFixed(2);
}
async function submit() {
  hideBanner();
  if (state.selection.size === 0) {
    showInline("Select at least one jurisdiction to ban.");
    return;
  }
  try {
    const result = await client.scenario({
      regions: state.selection.ids(),
      effectiveness: state.effectiveness,
      basis: state.basis
    });
    state.result = result;
    state.rows = buildRows(result.map, state.regions);
    renderResult(result, state.regions, state.rows, state.sort);
  } catch (err) {
    if (isAbort(err)) return;
    if (err instanceof ApiError) {
      showInline(`Scenario rejected (${err.status}): ${err.message}`);
      return;
    }
    showInline(`Request failed: ${message(err)}`);
  }
}
function renderResult(result, regions, rows, sort, root = document) {
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
    result.leakage_rate !== null && result.leakage_rate > 1 ? "rate above 1: the ban backfires" : "a rate above 1 would mean the ban backfires"
  );
  setText(
    root,
    "scenario-recap",
    `Banned ${result.banned_regions.join(", ")} at effectiveness ${result.effectiveness}, ${result.basis.toUpperCase()} basis, ${formatKt(result.energy_twh)} TWh constant energy`
  );
  renderTable(rows, sort, root);
  renderMap(result, regions, root);
  root.getElementById("results")?.removeAttribute("hidden");
}
function renderTable(rows, sort, root = document) {
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
function renderMap(result, regions, root = document) {
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
function bindTableSorting() {
  document.querySelectorAll("th[data-sort]").forEach((th) => {
    th.addEventListener("click", () => {
      if (!state?.result) return;
      state.sort = nextSort(state.sort, th.dataset.sort);
      renderTable(state.rows, state.sort);
    });
  });
}
function setText(root, id, text) {
  const node = root.getElementById(id);
  if (node) node.textContent = text;
}
function showBanner(text) {
  const banner = el("banner");
  banner.textContent = text;
  banner.removeAttribute("hidden");
}
function hideBanner() {
  el("banner").setAttribute("hidden", "");
}
function showInline(text) {
  const inline = el("inline-error");
  inline.textContent = text;
  inline.removeAttribute("hidden");
  window.setTimeout(() => inline.setAttribute("hidden", ""), 6e3);
}
function setControlsEnabled(enabled) {
  document.querySelectorAll("#controls input, #controls button").forEach((node) => {
    node.disabled = !enabled;
  });
}
function message(err) {
  return err instanceof Error ? err.message : String(err);
}
if (typeof window !== "undefined" && document.getElementById("controls")) {
  bindTableSorting();
  void loadWorld();
}
export {
  renderResult
};
//# sourceMappingURL=app.js.map
