/*
 * Bundle model: parsing and validation of the export bundle produced by the
 * audit CLI. Everything happens client-side; the bundle never leaves the
 * page. The loaded model is frozen: views may only read it.
 */

export const SUPPORTED_SCHEMA_VERSION = "1";

export interface BundleRecord {
  platform: string;
  category: string;
  timestamp: number | null;
  context_id: string;
  attributes: Record<string, string>;
  source_file: string;
}

export interface CategoryAggregates {
  total: number;
  top_contexts: [string, number][];
  top_authors: [string, number][];
  per_day: Record<string, number>;
  per_hour: number[];
}

export interface TransparencyEntry {
  explanations: Record<string, string>;
  purpose: string;
  retention: string;
  access: string;
}

export interface DisclosureFinding {
  clause: string;
  scope: string;
  status: "disclosed" | "absent";
  evidence: string | null;
}

export interface Bundle {
  schema_version: string;
  generated_at: string;
  snapshot: {
    platform: string;
    account_alias: string;
    request_time: number;
  };
  records: BundleRecord[];
  aggregates: {
    categories: Record<string, CategoryAggregates>;
    device_share: { counts: Record<string, number>; share: Record<string, number> };
    searches_per_day: { per_day: Record<string, number>; mean_per_active_day: number };
  };
  transparency: Record<string, TransparencyEntry>;
  reports?: { compliance?: { disclosure?: DisclosureFinding[] } } | null;
  warnings: string[];
}

export type LoadResult =
  | { ok: true; bundle: Bundle }
  | { ok: false; error: string };

function deepFreeze<T>(value: T): T {
  if (value && typeof value === "object" && !Object.isFrozen(value)) {
    Object.freeze(value);
    for (const key of Object.keys(value as object)) {
      deepFreeze((value as Record<string, unknown>)[key]);
    }
  }
  return value;
}

/** Validate a parsed JSON document as a bundle. Never throws. */
export function loadBundle(raw: unknown): LoadResult {
  if (typeof raw !== "object" || raw === null || Array.isArray(raw)) {
    return { ok: false, error: "not a bundle document (expected a JSON object)" };
  }
  const doc = raw as Record<string, unknown>;
  const version = doc["schema_version"];
  if (version !== SUPPORTED_SCHEMA_VERSION) {
    return {
      ok: false,
      error:
        `unsupported bundle schema_version ${JSON.stringify(version)}; ` +
        `this viewer supports version "${SUPPORTED_SCHEMA_VERSION}"`,
    };
  }
  if (!Array.isArray(doc["records"])) {
    return { ok: false, error: "bundle has no records array" };
  }
  const aggregates = doc["aggregates"] as Record<string, unknown> | undefined;
  if (!aggregates || typeof aggregates["categories"] !== "object") {
    return { ok: false, error: "bundle has no precomputed aggregates" };
  }
  if (typeof doc["transparency"] !== "object" || doc["transparency"] === null) {
    return { ok: false, error: "bundle has no transparency section" };
  }
  return { ok: true, bundle: deepFreeze(doc as unknown as Bundle) };
}

/** JSON.parse wrapper for file contents; malformed text becomes an error. */
export function parseBundleText(text: string): LoadResult {
  let parsed: unknown;
  try {
    parsed = JSON.parse(text);
  } catch (err) {
    return { ok: false, error: `not valid JSON: ${(err as Error).message}` };
  }
  return loadBundle(parsed);
}

export function categoriesOf(bundle: Bundle): string[] {
  return Object.keys(bundle.aggregates.categories).sort();
}

export function recordsOf(bundle: Bundle, category: string): BundleRecord[] {
  return bundle.records.filter((r) => r.category === category);
}
