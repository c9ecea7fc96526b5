/**
 * Region panel geometry: map the server's exact vertex/pair coordinates
 * into pixel space. Rational strings are converted to numbers only for
 * pixel placement; labels keep the exact strings.
 */

import type { RegionResult } from "./api.js";
import { parseRat, toNumber } from "./rational.js";

export interface Viewport {
  width: number;
  height: number;
  margin: number;
}

export interface PlottedPoint {
  px: number;
  py: number;
  label: string;
}

export interface RegionGeometry {
  polygon: PlottedPoint[];
  pairs: PlottedPoint[];
  xRange: [number, number];
  yRange: [number, number];
}

export function regionGeometry(
  region: RegionResult,
  view: Viewport,
): RegionGeometry {
  const xs = region.vertices.map((v) => toNumber(parseRat(v.x)));
  const ys = region.vertices.map((v) => toNumber(parseRat(v.y)));
  const px = region.pairs.map((p) => toNumber(parseRat(p.p[0] ?? "0")));
  const py = region.pairs.map((p) => toNumber(parseRat(p.u[2] ?? "0")));
  const allX = xs.concat(px);
  const allY = ys.concat(py);
  const lo = (vals: number[]) => (vals.length ? Math.min(...vals) : 0);
  const hi = (vals: number[]) => (vals.length ? Math.max(...vals) : 1);
  const xRange: [number, number] = [lo(allX), hi(allX)];
  const yRange: [number, number] = [lo(allY), hi(allY)];
  const spanX = xRange[1] - xRange[0] || 1;
  const spanY = yRange[1] - yRange[0] || 1;
  const w = view.width - 2 * view.margin;
  const h = view.height - 2 * view.margin;
  const toPx = (x: number, y: number): [number, number] => [
    view.margin + ((x - xRange[0]) / spanX) * w,
    // y axis points up
    view.height - view.margin - ((y - yRange[0]) / spanY) * h,
  ];
  const polygon = region.vertices.map((v, i) => {
    const [a, b] = toPx(xs[i]!, ys[i]!);
    return { px: a, py: b, label: `(${v.x}, ${v.y})` };
  });
  const pairs = region.pairs.map((p, i) => {
    const [a, b] = toPx(px[i]!, py[i]!);
    return {
      px: a,
      py: b,
      label: `p=(${p.p.join(", ")}) u=(${p.u.join(", ")})`,
    };
  });
  return { polygon, pairs, xRange, yRange };
}

/** Draw onto a 2d canvas context; no-op geometry stays testable above. */
export function drawRegion(
  ctx: CanvasRenderingContext2D,
  region: RegionResult,
  view: Viewport,
): RegionGeometry {
  const geo = regionGeometry(region, view);
  ctx.clearRect(0, 0, view.width, view.height);
  if (geo.polygon.length) {
    ctx.beginPath();
    geo.polygon.forEach((pt, i) =>
      i === 0 ? ctx.moveTo(pt.px, pt.py) : ctx.lineTo(pt.px, pt.py),
    );
    ctx.closePath();
    ctx.strokeStyle = "#2563eb";
    ctx.fillStyle = "rgba(37, 99, 235, 0.12)";
    ctx.fill();
    ctx.stroke();
  }
  ctx.fillStyle = "#dc2626";
  for (const pt of geo.pairs) {
    ctx.fillRect(pt.px - 3, pt.py - 3, 6, 6);
  }
  return geo;
}
