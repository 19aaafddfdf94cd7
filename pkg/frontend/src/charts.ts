// SVG chart builders. All geometry comes from server-provided plot data
// (bin edges, curve points, fences); nothing statistical happens here.

import type { DensityCurve, HistogramData } from "./types.js";

const W = 420;
const H = 180;
const PAD = { left: 46, right: 12, top: 10, bottom: 24 };

function svgEl(tag: string, attrs: Record<string, string | number>): SVGElement {
  const el = document.createElementNS("http://www.w3.org/2000/svg", tag);
  for (const [k, v] of Object.entries(attrs)) el.setAttribute(k, String(v));
  return el;
}

function scale(domain: [number, number], range: [number, number]) {
  const [d0, d1] = domain;
  const [r0, r1] = range;
  const span = d1 - d0 || 1;
  return (v: number) => r0 + ((v - d0) / span) * (r1 - r0);
}

function axisLabel(x: number, y: number, text: string, anchor = "middle"): SVGElement {
  const el = svgEl("text", { x, y, "text-anchor": anchor, class: "axis-label" });
  el.textContent = text;
  return el;
}

function fmt(v: number): string {
  if (Math.abs(v) >= 10000 || (Math.abs(v) < 0.01 && v !== 0)) return v.toExponential(1);
  return String(Math.round(v * 100) / 100);
}

export function histogramSvg(
  data: HistogramData,
  fences?: { lower: number; upper: number },
): SVGElement {
  const svg = svgEl("svg", { viewBox: `0 0 ${W} ${H}`, class: "chart" });
  const edges = data.bin_edges;
  const counts = data.counts;
  const xDomain: [number, number] = [
    Math.min(edges[0], fences?.lower ?? edges[0]),
    Math.max(edges[edges.length - 1], fences?.upper ?? edges[edges.length - 1]),
  ];
  const x = scale(xDomain, [PAD.left, W - PAD.right]);
  const yMax = Math.max(...counts, 1);
  const y = scale([0, yMax], [H - PAD.bottom, PAD.top]);

  for (let i = 0; i < counts.length; i++) {
    const x0 = x(edges[i]);
    const x1 = x(edges[i + 1]);
    svg.appendChild(
      svgEl("rect", {
        x: x0,
        y: y(counts[i]),
        width: Math.max(x1 - x0 - 0.5, 0.5),
        height: H - PAD.bottom - y(counts[i]),
        class: "bar",
      }),
    );
  }
  if (fences) {
    for (const [v, label] of [
      [fences.lower, "lower fence"],
      [fences.upper, "upper fence"],
    ] as [number, string][]) {
      svg.appendChild(
        svgEl("line", {
          x1: x(v), x2: x(v), y1: PAD.top, y2: H - PAD.bottom, class: "fence",
        }),
      );
      svg.appendChild(axisLabel(x(v), PAD.top + 8, label));
    }
  }
  svg.appendChild(axisLabel(PAD.left, H - 6, fmt(xDomain[0]), "start"));
  svg.appendChild(axisLabel(W - PAD.right, H - 6, fmt(xDomain[1]), "end"));
  svg.appendChild(axisLabel(PAD.left - 6, PAD.top + 8, fmt(yMax), "end"));
  return svg;
}

function curvePath(curve: DensityCurve, x: (v: number) => number, y: (v: number) => number): string {
  return curve.xs
    .map((vx, i) => `${i === 0 ? "M" : "L"}${x(vx).toFixed(1)},${y(curve.ys[i]).toFixed(1)}`)
    .join(" ");
}

export function densitySvg(
  curves: { label: string; curve: DensityCurve }[],
): SVGElement {
  const svg = svgEl("svg", { viewBox: `0 0 ${W} ${H}`, class: "chart" });
  const xs = curves.flatMap((c) => [c.curve.xs[0], c.curve.xs[c.curve.xs.length - 1]]);
  const yMax = Math.max(...curves.flatMap((c) => c.curve.ys));
  const x = scale([Math.min(...xs), Math.max(...xs)], [PAD.left, W - PAD.right]);
  const y = scale([0, yMax], [H - PAD.bottom, PAD.top]);
  curves.forEach(({ label, curve }, i) => {
    svg.appendChild(
      svgEl("path", { d: curvePath(curve, x, y), class: `density density-${i}` }),
    );
    const lx = PAD.left + 8;
    const ly = PAD.top + 12 + i * 14;
    svg.appendChild(svgEl("line", { x1: lx, x2: lx + 16, y1: ly - 4, y2: ly - 4, class: `density density-${i}` }));
    svg.appendChild(axisLabel(lx + 20, ly, label, "start"));
  });
  svg.appendChild(axisLabel(PAD.left, H - 6, fmt(Math.min(...xs)), "start"));
  svg.appendChild(axisLabel(W - PAD.right, H - 6, fmt(Math.max(...xs)), "end"));
  return svg;
}

export function meanDiffSvg(diff: {
  diff: number;
  ci_low: number;
  ci_high: number;
}): SVGElement {
  const svg = svgEl("svg", { viewBox: `0 0 ${W} 70`, class: "chart" });
  const span = Math.max(Math.abs(diff.ci_low), Math.abs(diff.ci_high), 1e-9) * 1.2;
  const x = scale([-span, span], [PAD.left, W - PAD.right]);
  const mid = 35;
  svg.appendChild(svgEl("line", { x1: x(0), x2: x(0), y1: 10, y2: 60, class: "zero-line" }));
  svg.appendChild(
    svgEl("line", { x1: x(diff.ci_low), x2: x(diff.ci_high), y1: mid, y2: mid, class: "ci" }),
  );
  svg.appendChild(svgEl("circle", { cx: x(diff.diff), cy: mid, r: 4, class: "point" }));
  svg.appendChild(axisLabel(x(diff.ci_low), mid + 16, fmt(diff.ci_low)));
  svg.appendChild(axisLabel(x(diff.ci_high), mid + 16, fmt(diff.ci_high)));
  svg.appendChild(axisLabel(x(0), 9, "0"));
  return svg;
}
