/*
 * The three presentation modes for one category panel:
 *   concise      high-level charts recomputed from the filtered records
 *   raw          one row per record with clarified column labels
 *   transparent  field-level explanations plus purpose/retention/access
 *
 * Render functions are pure string builders over the (frozen) bundle, so
 * component tests can verify every displayed number without a DOM.
 */

import {
  filterRecords,
  peakHour,
  recomputeAggregates,
  type Aggregates,
  type TimeWindow,
} from "./aggregate.js";
import type { Bundle, BundleRecord, TransparencyEntry } from "./model.js";
import { recordsOf } from "./model.js";

export type ViewMode = "concise" | "raw" | "transparent";

export const PLACEHOLDER = "explanation unavailable";
export const RAW_PREFIX = "raw.";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function entryFor(bundle: Bundle, category: string): TransparencyEntry {
  return (
    bundle.transparency[category] ?? {
      explanations: {},
      purpose: PLACEHOLDER,
      retention: PLACEHOLDER,
      access: PLACEHOLDER,
    }
  );
}

// ------------------------------------------------------------------ concise

export interface ConciseModel {
  category: string;
  aggregates: Aggregates;
  peakHour: number;
  empty: boolean;
}

export function conciseModel(
  bundle: Bundle,
  category: string,
  window: TimeWindow = {},
): ConciseModel {
  const records = filterRecords(recordsOf(bundle, category), window);
  const aggregates = recomputeAggregates(records);
  return {
    category,
    aggregates,
    peakHour: peakHour(aggregates.perHour),
    empty: records.length === 0,
  };
}

function barChart(pairs: [string, number][], title: string): string {
  if (pairs.length === 0) return "";
  const max = Math.max(...pairs.map(([, n]) => n));
  const rowHeight = 22;
  const bars = pairs
    .map(([label, count], i) => {
      const width = max > 0 ? Math.round((count / max) * 220) : 0;
      const y = i * rowHeight;
      return (
        `<rect x="0" y="${y + 4}" width="${width}" height="14" class="bar"></rect>` +
        `<text x="${width + 6}" y="${y + 15}" class="bar-count">${count}</text>` +
        `<text x="0" y="${y + 15}" dx="4" class="bar-label">${escapeHtml(label)}</text>`
      );
    })
    .join("");
  const height = pairs.length * rowHeight + 6;
  return (
    `<figure class="chart"><figcaption>${escapeHtml(title)}</figcaption>` +
    `<svg viewBox="0 0 320 ${height}" width="320" height="${height}" role="img">${bars}</svg></figure>`
  );
}

function sparkline(perDay: Record<string, number>): string {
  const days = Object.keys(perDay).filter((d) => d !== "unknown").sort();
  if (days.length === 0) return "";
  const max = Math.max(...days.map((d) => perDay[d] ?? 0));
  const bars = days
    .map((day, i) => {
      const count = perDay[day] ?? 0;
      const h = max > 0 ? Math.max(2, Math.round((count / max) * 40)) : 2;
      return `<rect x="${i * 8}" y="${44 - h}" width="6" height="${h}" class="bar"><title>${day}: ${count}</title></rect>`;
    })
    .join("");
  return (
    `<figure class="chart"><figcaption>activity per day</figcaption>` +
    `<svg viewBox="0 0 ${days.length * 8} 46" height="46">${bars}</svg></figure>`
  );
}

export function renderConcise(
  bundle: Bundle,
  category: string,
  window: TimeWindow = {},
): string {
  const model = conciseModel(bundle, category, window);
  if (model.empty) {
    return `<div class="empty-state">No ${escapeHtml(category)} activity in the selected time range.</div>`;
  }
  const agg = model.aggregates;
  const peak =
    model.peakHour >= 0
      ? `<p class="insight">Busiest hour (UTC): <strong data-peak-hour="${model.peakHour}">${model.peakHour}:00</strong></p>`
      : "";
  return (
    `<div class="concise" data-category="${escapeHtml(category)}">` +
    `<p class="insight">Total entries: <strong data-total="${agg.total}">${agg.total}</strong></p>` +
    peak +
    barChart(agg.topAuthors, "most frequent accounts") +
    barChart(agg.topContexts.slice(0, 5), "most frequent items") +
    sparkline(agg.perDay) +
    `</div>`
  );
}

// ---------------------------------------------------------------------- raw

export interface RawOptions {
  page?: number;
  pageSize?: number;
  sortField?: string;
  sortDirection?: "asc" | "desc";
  showOriginalFields?: boolean;
}

export interface RawModel {
  headers: { field: string; label: string }[];
  rows: { cells: string[] }[];
  page: number;
  totalPages: number;
  totalRows: number;
  sortField: string;
  sortDirection: "asc" | "desc";
  showOriginalFields: boolean;
}

export function fieldsOf(records: BundleRecord[], includeRaw: boolean): string[] {
  const fields = new Set<string>();
  let hasContext = false;
  let hasTimestamp = false;
  for (const record of records) {
    if (record.context_id) hasContext = true;
    if (record.timestamp !== null) hasTimestamp = true;
    for (const key of Object.keys(record.attributes)) {
      if (key.startsWith(RAW_PREFIX) && !includeRaw) continue;
      fields.add(key);
    }
  }
  const ordered: string[] = [];
  if (hasTimestamp) ordered.push("timestamp");
  if (hasContext) ordered.push("context_id");
  ordered.push(...[...fields].sort());
  return ordered;
}

function fieldValue(record: BundleRecord, field: string): string {
  if (field === "timestamp") {
    return record.timestamp === null
      ? ""
      : new Date(record.timestamp * 1000).toISOString().replace(".000Z", "Z");
  }
  if (field === "context_id") return record.context_id;
  return record.attributes[field] ?? "";
}

function sortValue(record: BundleRecord, field: string): number | string {
  if (field === "timestamp") return record.timestamp ?? -1;
  return fieldValue(record, field);
}

export function rawModel(
  bundle: Bundle,
  category: string,
  options: RawOptions = {},
): RawModel {
  const {
    page = 1,
    pageSize = 10,
    sortField = "timestamp",
    sortDirection = "desc",
    showOriginalFields = false,
  } = options;
  const records = recordsOf(bundle, category);
  const entry = entryFor(bundle, category);
  const fields = fieldsOf(records, showOriginalFields);

  const indexed = records.map((record, i) => ({ record, i }));
  indexed.sort((a, b) => {
    const va = sortValue(a.record, sortField);
    const vb = sortValue(b.record, sortField);
    let cmp = 0;
    if (va < vb) cmp = -1;
    else if (va > vb) cmp = 1;
    if (sortDirection === "desc") cmp = -cmp;
    return cmp !== 0 ? cmp : a.i - b.i; // stable
  });

  const totalPages = Math.max(1, Math.ceil(indexed.length / pageSize));
  const current = Math.min(Math.max(1, page), totalPages);
  const visible = indexed.slice((current - 1) * pageSize, current * pageSize);
  return {
    headers: fields.map((field) => ({
      field,
      // plain-language label from the transparency entry when the platform
      // explained the field; otherwise the canonical name
      label: entry.explanations[field] ?? field,
    })),
    rows: visible.map(({ record }) => ({
      cells: fields.map((field) => fieldValue(record, field)),
    })),
    page: current,
    totalPages,
    totalRows: indexed.length,
    sortField,
    sortDirection,
    showOriginalFields,
  };
}

export function renderRaw(
  bundle: Bundle,
  category: string,
  options: RawOptions = {},
): string {
  const model = rawModel(bundle, category, options);
  if (model.totalRows === 0) {
    return `<div class="empty-state">No ${escapeHtml(category)} records.</div>`;
  }
  const heads = model.headers
    .map(
      (h) =>
        `<th><button class="sort" data-sort-field="${escapeHtml(h.field)}">` +
        `${escapeHtml(h.label)}</button></th>`,
    )
    .join("");
  const body = model.rows
    .map(
      (row) =>
        `<tr>${row.cells.map((c) => `<td>${escapeHtml(c)}</td>`).join("")}</tr>`,
    )
    .join("");
  const toggleLabel = model.showOriginalFields
    ? "hide original fields"
    : "show original fields";
  return (
    `<div class="raw" data-category="${escapeHtml(category)}">` +
    `<div class="raw-controls">` +
    `<button class="toggle-original" data-show-original="${model.showOriginalFields}">${toggleLabel}</button>` +
    `<span class="row-count">${model.totalRows} records</span>` +
    `</div>` +
    `<table><thead><tr>${heads}</tr></thead><tbody>${body}</tbody></table>` +
    `<nav class="pager">` +
    `<button class="page-prev" ${model.page <= 1 ? "disabled" : ""}>previous</button>` +
    `<span>page ${model.page} of ${model.totalPages}</span>` +
    `<button class="page-next" ${model.page >= model.totalPages ? "disabled" : ""}>next</button>` +
    `</nav></div>`
  );
}

// -------------------------------------------------------------- transparent

export interface TransparentModel {
  category: string;
  fields: { field: string; explanation: string }[];
  purpose: string;
  retention: string;
  access: string;
  badges: string[];
}

const CLAUSE_BADGES: Record<string, string> = {
  purpose_15_1_a: "no purpose disclosed",
  recipients_15_1_c: "no recipients disclosed",
  retention_15_1_d: "no retention period disclosed",
  source_15_1_g: "no data source disclosed",
  automated_15_1_h: "no automated-decision info disclosed",
};

export function transparentModel(bundle: Bundle, category: string): TransparentModel {
  const records = recordsOf(bundle, category);
  const entry = entryFor(bundle, category);
  const fields = fieldsOf(records, false).map((field) => ({
    field,
    // only bundle-provided explanations; the viewer never invents text
    explanation: entry.explanations[field] ?? PLACEHOLDER,
  }));
  const badges: string[] = [];
  const findings = bundle.reports?.compliance?.disclosure ?? [];
  for (const finding of findings) {
    if (finding.status === "absent" && CLAUSE_BADGES[finding.clause]) {
      badges.push(CLAUSE_BADGES[finding.clause] as string);
    }
  }
  return {
    category,
    fields,
    purpose: entry.purpose,
    retention: entry.retention,
    access: entry.access,
    badges,
  };
}

export function renderTransparent(bundle: Bundle, category: string): string {
  const model = transparentModel(bundle, category);
  const badges = model.badges
    .map((b) => `<span class="badge">${escapeHtml(b)}</span>`)
    .join("");
  const fieldRows = model.fields
    .map(
      (f) =>
        `<tr><th>${escapeHtml(f.field)}</th>` +
        `<td class="${f.explanation === PLACEHOLDER ? "placeholder" : ""}">` +
        `${escapeHtml(f.explanation)}</td></tr>`,
    )
    .join("");
  return (
    `<div class="transparent" data-category="${escapeHtml(model.category)}">` +
    (badges ? `<div class="badges">${badges}</div>` : "") +
    `<dl class="meta">` +
    `<dt>Why it is collected</dt><dd>${escapeHtml(model.purpose)}</dd>` +
    `<dt>How long it is kept</dt><dd>${escapeHtml(model.retention)}</dd>` +
    `<dt>Who can access it</dt><dd>${escapeHtml(model.access)}</dd>` +
    `</dl>` +
    `<table class="fields"><caption>fields in this category</caption>${fieldRows}</table>` +
    `</div>`
  );
}
