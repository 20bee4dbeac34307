/*
 * DOM wiring for the viewer page. Data flow: local file picker -> frozen
 * in-memory bundle -> pure render functions. No network request ever
 * carries bundle content; the page works entirely offline.
 */

import { categoriesOf, parseBundleText, type Bundle } from "./model.js";
import type { TimeWindow } from "./aggregate.js";
import {
  renderConcise,
  renderRaw,
  renderTransparent,
  type RawOptions,
  type ViewMode,
} from "./views.js";

// One-click data request automation is deliberately stubbed: shipping it is
// out of scope for the viewer, the flag only reserves the UI slot.
const FEATURES = { requestAutomation: false };

interface PanelState {
  mode: ViewMode;
  raw: RawOptions;
}

interface AppState {
  bundle: Bundle | null;
  category: string | null;
  window: TimeWindow;
  panels: Map<string, PanelState>;
}

const state: AppState = {
  bundle: null,
  category: null,
  window: {},
  panels: new Map(),
};

function $(selector: string): HTMLElement {
  const node = document.querySelector(selector);
  if (!node) throw new Error(`missing element: ${selector}`);
  return node as HTMLElement;
}

function panel(category: string): PanelState {
  let existing = state.panels.get(category);
  if (!existing) {
    // concise by default: digestible first, escalate on demand
    existing = { mode: "concise", raw: {} };
    state.panels.set(category, existing);
  }
  return existing;
}

function showError(message: string): void {
  const panelNode = $("#error-panel");
  panelNode.textContent = message;
  panelNode.hidden = false;
  $("#app").hidden = true;
}

function parseDateInput(value: string, endOfDay: boolean): number | null {
  if (!value) return null;
  const epoch = Date.parse(`${value}T${endOfDay ? "23:59:59" : "00:00:00"}Z`);
  return Number.isNaN(epoch) ? null : Math.floor(epoch / 1000);
}

function render(): void {
  const bundle = state.bundle;
  if (!bundle) return;
  $("#error-panel").hidden = true;
  $("#app").hidden = false;

  const account = bundle.snapshot.account_alias;
  $("#summary").textContent =
    `${bundle.snapshot.platform} export for "${account}", ` +
    `${bundle.records.length} records`;

  const categories = categoriesOf(bundle);
  if (!state.category || !categories.includes(state.category)) {
    state.category = categories[0] ?? null;
  }
  $("#tabs").innerHTML = categories
    .map(
      (cat) =>
        `<button class="tab ${cat === state.category ? "active" : ""}" data-category="${cat}">` +
        `${cat} <span class="count">${bundle.aggregates.categories[cat]?.total ?? 0}</span></button>`,
    )
    .join("");

  if (!state.category) return;
  const active = panel(state.category);
  $("#modes").innerHTML = (["concise", "raw", "transparent"] as ViewMode[])
    .map(
      (mode) =>
        `<button class="mode ${mode === active.mode ? "active" : ""}" data-mode="${mode}">${mode}</button>`,
    )
    .join("");

  const content = $("#panel");
  if (active.mode === "concise") {
    content.innerHTML = renderConcise(bundle, state.category, state.window);
  } else if (active.mode === "raw") {
    content.innerHTML = renderRaw(bundle, state.category, active.raw);
  } else {
    content.innerHTML = renderTransparent(bundle, state.category);
  }
  $("#filter").hidden = active.mode !== "concise";

  const warnings = bundle.warnings ?? [];
  $("#warnings").innerHTML = warnings
    .map((w) => `<li>${w.replace(/</g, "&lt;")}</li>`)
    .join("");
}

function onPanelClick(event: Event): void {
  const target = event.target as HTMLElement;
  const category = state.category;
  if (!category) return;
  const active = panel(category);
  const sortButton = target.closest<HTMLElement>("button.sort");
  if (sortButton) {
    const field = sortButton.dataset["sortField"] ?? "timestamp";
    const sameField = active.raw.sortField === field;
    active.raw = {
      ...active.raw,
      sortField: field,
      sortDirection:
        sameField && active.raw.sortDirection === "desc" ? "asc" : "desc",
      page: 1,
    };
    render();
    return;
  }
  if (target.closest("button.toggle-original")) {
    active.raw = {
      ...active.raw,
      showOriginalFields: !active.raw.showOriginalFields,
    };
    render();
    return;
  }
  if (target.closest("button.page-prev")) {
    active.raw = { ...active.raw, page: (active.raw.page ?? 1) - 1 };
    render();
    return;
  }
  if (target.closest("button.page-next")) {
    active.raw = { ...active.raw, page: (active.raw.page ?? 1) + 1 };
    render();
  }
}

export function boot(): void {
  const input = $("#bundle-file") as HTMLInputElement;
  input.addEventListener("change", () => {
    const file = input.files?.[0];
    if (!file) return;
    const reader = new FileReader();
    reader.onload = () => {
      const result = parseBundleText(String(reader.result ?? ""));
      if (!result.ok) {
        showError(result.error);
        return;
      }
      state.bundle = result.bundle;
      state.category = null;
      state.panels.clear();
      state.window = {};
      render();
    };
    reader.onerror = () => showError("could not read the selected file");
    reader.readAsText(file);
  });

  $("#tabs").addEventListener("click", (event) => {
    const tab = (event.target as HTMLElement).closest<HTMLElement>("button.tab");
    if (tab?.dataset["category"]) {
      state.category = tab.dataset["category"];
      render();
    }
  });
  $("#modes").addEventListener("click", (event) => {
    const button = (event.target as HTMLElement).closest<HTMLElement>("button.mode");
    const category = state.category;
    if (button?.dataset["mode"] && category) {
      panel(category).mode = button.dataset["mode"] as ViewMode;
      render();
    }
  });
  $("#panel").addEventListener("click", onPanelClick);

  const applyFilter = () => {
    state.window = {
      start: parseDateInput(($("#filter-start") as HTMLInputElement).value, false),
      end: parseDateInput(($("#filter-end") as HTMLInputElement).value, true),
    };
    render();
  };
  $("#filter-start").addEventListener("change", applyFilter);
  $("#filter-end").addEventListener("change", applyFilter);
  $("#filter-clear").addEventListener("click", () => {
    ($("#filter-start") as HTMLInputElement).value = "";
    ($("#filter-end") as HTMLInputElement).value = "";
    state.window = {};
    render();
  });

  if (!FEATURES.requestAutomation) {
    $("#request-data").hidden = true;
  }
}

if (typeof document !== "undefined" && document.readyState !== "loading") {
  boot();
} else if (typeof document !== "undefined") {
  document.addEventListener("DOMContentLoaded", boot);
}
