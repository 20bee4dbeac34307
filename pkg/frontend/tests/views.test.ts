import { describe, expect, it } from "vitest";

import { loadBundle, type Bundle } from "../src/model.js";
import {
  PLACEHOLDER,
  conciseModel,
  rawModel,
  renderConcise,
  renderRaw,
  renderTransparent,
  transparentModel,
} from "../src/views.js";
import { fixtureBundle, readFixture } from "./helpers.js";

describe("concise view", () => {
  it("total equals the number of underlying records", () => {
    const bundle = fixtureBundle();
    const model = conciseModel(bundle, "watch");
    const records = bundle.records.filter((r) => r.category === "watch");
    expect(model.aggregates.total).toBe(records.length);
    expect(renderConcise(bundle, "watch")).toContain(
      `data-total="${records.length}"`,
    );
  });

  it("time filter recomputes totals from raw records", () => {
    const bundle = fixtureBundle();
    const window = { start: 1730000000, end: 1735000000 };
    const expected = bundle.records.filter(
      (r) =>
        r.category === "watch" &&
        r.timestamp !== null &&
        r.timestamp >= window.start &&
        r.timestamp <= window.end,
    ).length;
    const model = conciseModel(bundle, "watch", window);
    expect(model.aggregates.total).toBe(expected);
  });

  it("empty window shows the empty state", () => {
    const bundle = fixtureBundle();
    const html = renderConcise(bundle, "watch", { start: 1, end: 2 });
    expect(html).toContain("empty-state");
    expect(html).toContain("No watch activity");
  });

  it("peak hour matches a recomputation from raw records", () => {
    const bundle = fixtureBundle();
    const records = bundle.records.filter(
      (r) => r.category === "watch" && r.timestamp !== null,
    );
    const perHour = new Array<number>(24).fill(0);
    for (const r of records) {
      perHour[Math.floor(((r.timestamp as number) % 86400) / 3600)] += 1;
    }
    let want = -1;
    let max = 0;
    perHour.forEach((count, hour) => {
      if (count > max) {
        want = hour;
        max = count;
      }
    });
    expect(conciseModel(bundle, "watch").peakHour).toBe(want);
    expect(renderConcise(bundle, "watch")).toContain(`data-peak-hour="${want}"`);
  });
});

describe("raw view", () => {
  it("renders one row per record within the page size", () => {
    const bundle = fixtureBundle();
    const model = rawModel(bundle, "watch", { pageSize: 100 });
    const records = bundle.records.filter((r) => r.category === "watch");
    expect(model.rows).toHaveLength(records.length);
    expect(model.totalRows).toBe(records.length);
  });

  it("sorts by timestamp descending by default, stably", () => {
    const bundle = fixtureBundle();
    const model = rawModel(bundle, "like", { pageSize: 100 });
    const shown = model.rows.map((r) => r.cells[0]);
    expect(shown).toEqual([...shown].sort().reverse());
  });

  it("paginates", () => {
    const bundle = fixtureBundle();
    const page1 = rawModel(bundle, "watch", { pageSize: 2, page: 1 });
    const page2 = rawModel(bundle, "watch", { pageSize: 2, page: 2 });
    expect(page1.totalPages).toBeGreaterThan(1);
    expect(page1.rows).toHaveLength(2);
    expect(page1.rows[0]!.cells).not.toEqual(page2.rows[0]!.cells);
    // out-of-range pages clamp instead of erroring
    expect(rawModel(bundle, "watch", { pageSize: 2, page: 99 }).page).toBe(
      page1.totalPages,
    );
  });

  it("hides raw.-prefixed attributes behind the original-fields toggle", () => {
    const bundle = fixtureBundle();
    const hidden = rawModel(bundle, "watch", {});
    expect(hidden.headers.some((h) => h.field.startsWith("raw."))).toBe(false);
    const shown = rawModel(bundle, "watch", { showOriginalFields: true });
    expect(shown.headers.some((h) => h.field.startsWith("raw."))).toBe(true);
    expect(renderRaw(bundle, "watch")).toContain("show original fields");
  });

  it("uses plain-language labels from the transparency entry", () => {
    const bundle = fixtureBundle();
    const model = rawModel(bundle, "watch", {});
    const context = model.headers.find((h) => h.field === "context_id");
    expect(context?.label).toBe(
      bundle.transparency["watch"]!.explanations["context_id"],
    );
  });

  it("escapes markup in cell values", () => {
    const doc = readFixture("bundle.json") as Record<string, unknown>;
    const records = doc["records"] as Record<string, unknown>[];
    records[0]!["context_id"] = "<script>alert(1)</script>";
    const result = loadBundle(doc);
    expect(result.ok).toBe(true);
    const html = renderRaw((result as { ok: true; bundle: Bundle }).bundle, "account_details", {
      showOriginalFields: true,
    });
    expect(html).not.toContain("<script>alert(1)</script>");
  });
});

describe("transparent view", () => {
  it("shows bundle explanations and purpose/retention/access verbatim", () => {
    const bundle = fixtureBundle();
    const entry = bundle.transparency["watch"]!;
    const html = renderTransparent(bundle, "watch");
    expect(html).toContain(entry.purpose);
    expect(html).toContain(entry.retention);
    expect(html).toContain(entry.access);
    for (const text of Object.values(entry.explanations)) {
      expect(html).toContain(text);
    }
  });

  it("uses the placeholder for unexplained fields, never invented text", () => {
    const bundle = fixtureBundle();
    // connections has no curated entry in the knowledge base
    const model = transparentModel(bundle, "connections");
    expect(model.purpose).toBe(PLACEHOLDER);
    expect(model.fields.every((f) => f.explanation === PLACEHOLDER)).toBe(true);
    expect(renderTransparent(bundle, "connections")).toContain(PLACEHOLDER);
  });

  it("badges absent disclosures when reports are bundled", () => {
    const doc = readFixture("bundle.json") as Record<string, unknown>;
    doc["reports"] = {
      compliance: {
        disclosure: [
          { clause: "purpose_15_1_a", scope: "all", status: "absent", evidence: null },
          { clause: "retention_15_1_d", scope: "all", status: "disclosed", evidence: "kept 90 days" },
        ],
      },
    };
    const result = loadBundle(doc);
    if (!result.ok) throw new Error(result.error);
    const model = transparentModel(result.bundle, "watch");
    expect(model.badges).toEqual(["no purpose disclosed"]);
    expect(renderTransparent(result.bundle, "watch")).toContain(
      "no purpose disclosed",
    );
  });

  it("no badges without bundled reports", () => {
    expect(transparentModel(fixtureBundle(), "watch").badges).toEqual([]);
  });
});
