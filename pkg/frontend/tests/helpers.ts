import { readFileSync } from "node:fs";

import { loadBundle, type Bundle } from "../src/model.js";

export function readFixture(name: string): unknown {
  const url = new URL(`../fixtures/${name}`, import.meta.url);
  return JSON.parse(readFileSync(url, "utf-8"));
}

export function fixtureBundle(): Bundle {
  const result = loadBundle(readFixture("bundle.json"));
  if (!result.ok) throw new Error(result.error);
  return result.bundle;
}
