import * as fs from "node:fs";
import * as path from "node:path";
import { describe, expect, it } from "vitest";

import { renderRoc, renderRrmse } from "../src/figure";
import { parseRocCsv, parseRrmseCsv } from "../src/schema";

const FIXTURES = path.join(__dirname, "fixtures");
const rocRows = parseRocCsv(fs.readFileSync(path.join(FIXTURES, "p6_roc.csv"), "utf-8"));
const rrmseRows = parseRrmseCsv(fs.readFileSync(path.join(FIXTURES, "p6_rrmse.csv"), "utf-8"));

function extractPoints(svg: string): Array<[number, number]> {
  const pts: Array<[number, number]> = [];
  for (const m of svg.matchAll(/points="([^"]+)"/g)) {
    for (const pair of m[1].split(" ")) {
      const [x, y] = pair.split(",").map(Number);
      pts.push([x, y]);
    }
  }
  return pts;
}

describe("renderRoc", () => {
  const svg = renderRoc(rocRows);

  it("emits one labeled series per (strategy, csi_mode, L, M, eps) group", () => {
    const series = [...svg.matchAll(/data-series="([^"]+)"/g)].map((m) => m[1]);
    expect(series.length).toBe(8);
    expect(series.some((s) => s.includes("strategy=proposed1") && s.includes("csi_mode=imperfect"))).toBe(true);
    expect(series.some((s) => s.includes("strategy=bernoulli") && s.includes("csi_mode=perfect"))).toBe(true);
    // each series also appears as visible legend text
    const labels = [...svg.matchAll(/class="series-label">([^<]+)</g)].map((m) => m[1]);
    expect(new Set(labels)).toEqual(new Set(series));
  });

  it("keeps every plotted point inside the [0,1] x [0,1] axes box", () => {
    // axis box in pixel space: x in [58, 616], y in [36, 434]
    for (const [x, y] of extractPoints(svg)) {
      expect(x).toBeGreaterThanOrEqual(58);
      expect(x).toBeLessThanOrEqual(616);
      expect(y).toBeGreaterThanOrEqual(36);
      expect(y).toBeLessThanOrEqual(434);
    }
  });

  it("clamps out-of-range PFA/PMD values instead of overflowing the axes", () => {
    const weird = [{ ...rocRows[0], pfa: 1.7, pmd: -0.3 }];
    const pts = extractPoints(renderRoc(weird));
    expect(pts[0][0]).toBe(616); // pfa clamped to 1
    expect(pts[0][1]).toBe(434); // pmd clamped to 0
  });

  it("is deterministic", () => {
    expect(renderRoc(rocRows)).toBe(svg);
  });

  it("axes are labeled PFA / PMD", () => {
    expect(svg).toContain(">PFA<");
    expect(svg).toContain(">PMD<");
  });

  it("supports custom grouping keys", () => {
    const byStrategy = renderRoc(rocRows, { groupKeys: ["strategy"] });
    const series = [...byStrategy.matchAll(/data-series="([^"]+)"/g)].map((m) => m[1]);
    expect(series).toEqual(["strategy=proposed1", "strategy=bernoulli"]);
  });
});

describe("renderRrmse", () => {
  const svg = renderRrmse(rrmseRows);

  it("emits one series per (strategy, target) group", () => {
    const series = [...svg.matchAll(/data-series="([^"]+)"/g)].map((m) => m[1]);
    expect(series.length).toBe(4); // 2 strategies x {embb, mtc}
    expect(series).toContain("strategy=proposed1 target=embb");
    expect(series).toContain("strategy=bernoulli target=mtc");
  });

  it("plots one marker per CSV row", () => {
    const circles = [...svg.matchAll(/<circle /g)];
    // 4 series x L in {32, 64} x 2 CSI modes (the RRMSE schema carries no
    // csi_mode column, so both runs land in the same series)
    expect(circles.length).toBe(rrmseRows.length);
    expect(circles.length).toBe(16);
  });

  it("is deterministic", () => {
    expect(renderRrmse(rrmseRows)).toBe(svg);
  });
});
