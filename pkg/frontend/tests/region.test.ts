import { readFileSync } from "node:fs";
import { fileURLToPath } from "node:url";

import { describe, expect, it } from "vitest";

import type { RegionResult } from "../src/api.js";
import { regionGeometry } from "../src/region.js";
import type { Exchange } from "./replay.js";

const VIEW = { width: 640, height: 420, margin: 24 };

function segmentRegion(): RegionResult {
  const exchanges = JSON.parse(
    readFileSync(
      fileURLToPath(new URL("./fixtures/segment-replay.json", import.meta.url)),
      "utf8",
    ),
  ) as Exchange[];
  const hit = exchanges.find(
    (e) => e.path.endsWith("/region") && e.status === 200,
  );
  if (!hit) throw new Error("fixture has no region exchange");
  return JSON.parse(hit.text) as RegionResult;
}

describe("regionGeometry", () => {
  it("plots every vertex and pair inside the viewport", () => {
    const geo = regionGeometry(segmentRegion(), VIEW);
    for (const pt of [...geo.polygon, ...geo.pairs]) {
      expect(pt.px).toBeGreaterThanOrEqual(VIEW.margin);
      expect(pt.px).toBeLessThanOrEqual(VIEW.width - VIEW.margin);
      expect(pt.py).toBeGreaterThanOrEqual(VIEW.margin);
      expect(pt.py).toBeLessThanOrEqual(VIEW.height - VIEW.margin);
    }
  });

  it("keeps exact strings in the labels", () => {
    const region = segmentRegion();
    const geo = regionGeometry(region, VIEW);
    expect(geo.polygon.length).toBe(region.vertices.length);
    for (let i = 0; i < region.vertices.length; i++) {
      expect(geo.polygon[i]!.label).toContain(region.vertices[i]!.x);
      expect(geo.polygon[i]!.label).toContain(region.vertices[i]!.y);
    }
  });

  it("y grows upward in data space", () => {
    const region = segmentRegion();
    const geo = regionGeometry(region, VIEW);
    const ys = region.vertices.map((v) => {
      const [n, d] = v.y.includes("/") ? v.y.split("/") : [v.y, "1"];
      return Number(n) / Number(d);
    });
    const hiData = ys.indexOf(Math.max(...ys));
    const loData = ys.indexOf(Math.min(...ys));
    expect(geo.polygon[hiData]!.py).toBeLessThan(geo.polygon[loData]!.py);
  });

  it("degenerate single-point regions stay centered and finite", () => {
    const region: RegionResult = {
      vertices: [{ x: "1/2", y: "1/2", v: [] }],
      pairs: [],
      grid_step: 100,
    };
    const geo = regionGeometry(region, VIEW);
    expect(Number.isFinite(geo.polygon[0]!.px)).toBe(true);
    expect(Number.isFinite(geo.polygon[0]!.py)).toBe(true);
  });
});
