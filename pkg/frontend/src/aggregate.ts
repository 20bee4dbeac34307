/*
 * Client-side aggregation. Concise-view numbers are recomputed from the raw
 * records for the selected time window rather than trusting the bundle's
 * precomputed aggregates outside the full window: correctness over speed at
 * desk scale.
 */

import type { BundleRecord } from "./model.js";

export interface TimeWindow {
  start?: number | null; // UTC epoch seconds, inclusive
  end?: number | null;
}

export interface Aggregates {
  total: number;
  topContexts: [string, number][];
  topAuthors: [string, number][];
  perDay: Record<string, number>;
  perHour: number[];
}

export function dayKey(ts: number): string {
  const d = new Date(ts * 1000);
  const month = String(d.getUTCMonth() + 1).padStart(2, "0");
  const day = String(d.getUTCDate()).padStart(2, "0");
  return `${d.getUTCFullYear()}-${month}-${day}`;
}

export function inWindow(record: BundleRecord, window: TimeWindow): boolean {
  if (record.timestamp === null) {
    // untimestamped records only appear in the unfiltered view
    return window.start == null && window.end == null;
  }
  if (window.start != null && record.timestamp < window.start) return false;
  if (window.end != null && record.timestamp > window.end) return false;
  return true;
}

export function filterRecords(
  records: BundleRecord[],
  window: TimeWindow,
): BundleRecord[] {
  return records.filter((r) => inWindow(r, window));
}

function topOf(counts: Map<string, number>, limit = 10): [string, number][] {
  return [...counts.entries()]
    .sort((a, b) => (b[1] - a[1]) || (a[0] < b[0] ? -1 : 1))
    .slice(0, limit);
}

export function recomputeAggregates(records: BundleRecord[]): Aggregates {
  const contexts = new Map<string, number>();
  const authors = new Map<string, number>();
  const perDay: Record<string, number> = {};
  const perHour = new Array<number>(24).fill(0);
  for (const record of records) {
    if (record.context_id) {
      contexts.set(record.context_id, (contexts.get(record.context_id) ?? 0) + 1);
    }
    const author = record.attributes["author_name"];
    if (author) {
      authors.set(author, (authors.get(author) ?? 0) + 1);
    }
    if (record.timestamp === null) {
      perDay["unknown"] = (perDay["unknown"] ?? 0) + 1;
    } else {
      const day = dayKey(record.timestamp);
      perDay[day] = (perDay[day] ?? 0) + 1;
      const hour = Math.floor((record.timestamp % 86400) / 3600);
      perHour[hour] = (perHour[hour] ?? 0) + 1;
    }
  }
  return {
    total: records.length,
    topContexts: topOf(contexts),
    topAuthors: topOf(authors),
    perDay,
    perHour,
  };
}

/** Index of the busiest hour; first index wins ties; -1 when empty. */
export function peakHour(perHour: number[]): number {
  let best = -1;
  let bestCount = 0;
  perHour.forEach((count, hour) => {
    if (count > bestCount) {
      best = hour;
      bestCount = count;
    }
  });
  return best;
}
