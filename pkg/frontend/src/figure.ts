/**
 * Deterministic SVG rendering of ROC and RRMSE figures.
 *
 * ROC: PMD (y) vs PFA (x), both axes clamped to [0,1], one polyline per
 * group. RRMSE: rrmse_pct (y) vs pilot length L (x), one polyline with
 * markers per group. No timestamps or randomness: identical inputs give
 * identical SVG bytes.
 */

import { groupBy, RocRow, RrmseRow } from "./schema";

export type FigureKind = "roc" | "rrmse";

export interface FigureSpec {
  kind: FigureKind;
  groupKeys: string[];
  width?: number;
  height?: number;
  title?: string;
}

export const DEFAULT_ROC_GROUP = ["strategy", "csi_mode", "L", "M", "eps"];
export const DEFAULT_RRMSE_GROUP = ["strategy", "target"];

const PALETTE = [
  "#1f77b4", "#d62728", "#2ca02c", "#9467bd",
  "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f",
];

const MARGIN = { top: 36, right: 24, bottom: 46, left: 58 };

interface Scale {
  (v: number): number;
}

function linearScale(d0: number, d1: number, r0: number, r1: number): Scale {
  const span = d1 - d0 || 1;
  return (v) => r0 + ((v - d0) / span) * (r1 - r0);
}

function fmt(v: number): string {
  return Number(v.toFixed(2)).toString();
}

function clamp01(v: number): number {
  return Math.min(1, Math.max(0, v));
}

function axes(
  x: Scale, y: Scale,
  xDomain: [number, number], yDomain: [number, number],
  xLabel: string, yLabel: string,
  width: number, height: number,
  xTicks: number[], yTicks: number[],
): string {
  const parts: string[] = [];
  const x0 = MARGIN.left;
  const x1 = width - MARGIN.right;
  const y0 = height - MARGIN.bottom;
  const y1 = MARGIN.top;
  parts.push(`<line x1="${x0}" y1="${y0}" x2="${x1}" y2="${y0}" stroke="black"/>`);
  parts.push(`<line x1="${x0}" y1="${y0}" x2="${x0}" y2="${y1}" stroke="black"/>`);
  for (const t of xTicks) {
    const px = x(t);
    parts.push(`<line x1="${px}" y1="${y0}" x2="${px}" y2="${y0 + 5}" stroke="black"/>`);
    parts.push(
      `<text x="${px}" y="${y0 + 18}" font-size="11" text-anchor="middle">${fmt(t)}</text>`,
    );
  }
  for (const t of yTicks) {
    const py = y(t);
    parts.push(`<line x1="${x0 - 5}" y1="${py}" x2="${x0}" y2="${py}" stroke="black"/>`);
    parts.push(
      `<text x="${x0 - 8}" y="${py + 4}" font-size="11" text-anchor="end">${fmt(t)}</text>`,
    );
  }
  const cx = (x0 + x1) / 2;
  parts.push(
    `<text x="${cx}" y="${height - 10}" font-size="13" text-anchor="middle">${xLabel}</text>`,
  );
  const cy = (y0 + y1) / 2;
  parts.push(
    `<text x="16" y="${cy}" font-size="13" text-anchor="middle" transform="rotate(-90 16 ${cy})">${yLabel}</text>`,
  );
  return parts.join("\n");
}

function legend(labels: string[], width: number): string {
  const parts: string[] = [];
  labels.forEach((label, i) => {
    const y = MARGIN.top + 8 + i * 16;
    const x = width - MARGIN.right - 8;
    const color = PALETTE[i % PALETTE.length];
    parts.push(
      `<line x1="${x - 180}" y1="${y}" x2="${x - 156}" y2="${y}" stroke="${color}" stroke-width="2"/>`,
      `<text x="${x - 150}" y="${y + 4}" font-size="11" class="series-label">${label}</text>`,
    );
  });
  return parts.join("\n");
}

function svgDocument(width: number, height: number, title: string, body: string): string {
  return [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" viewBox="0 0 ${width} ${height}" font-family="sans-serif">`,
    `<rect width="${width}" height="${height}" fill="white"/>`,
    `<text x="${width / 2}" y="20" font-size="14" text-anchor="middle">${title}</text>`,
    body,
    "</svg>",
    "",
  ].join("\n");
}

export function renderRoc(rows: RocRow[], spec: Partial<FigureSpec> = {}): string {
  const width = spec.width ?? 640;
  const height = spec.height ?? 480;
  const keys = spec.groupKeys ?? DEFAULT_ROC_GROUP;
  const groups = groupBy(rows as unknown as Record<string, unknown>[], keys) as unknown as Map<string, RocRow[]>;
  const x = linearScale(0, 1, MARGIN.left, width - MARGIN.right);
  const y = linearScale(0, 1, height - MARGIN.bottom, MARGIN.top);
  const ticks = [0, 0.2, 0.4, 0.6, 0.8, 1];
  const body: string[] = [
    axes(x, y, [0, 1], [0, 1], "PFA", "PMD", width, height, ticks, ticks),
  ];
  let i = 0;
  for (const [label, pts] of groups) {
    const sorted = [...pts].sort((a, b) => a.pfa - b.pfa || a.pmd - b.pmd);
    const path = sorted
      .map((p) => `${x(clamp01(p.pfa)).toFixed(2)},${y(clamp01(p.pmd)).toFixed(2)}`)
      .join(" ");
    const color = PALETTE[i % PALETTE.length];
    body.push(
      `<polyline points="${path}" fill="none" stroke="${color}" stroke-width="2" data-series="${label}"/>`,
    );
    i += 1;
  }
  body.push(legend([...groups.keys()], width));
  return svgDocument(width, height, spec.title ?? "Missed detection vs false alarm", body.join("\n"));
}

export function renderRrmse(rows: RrmseRow[], spec: Partial<FigureSpec> = {}): string {
  const width = spec.width ?? 640;
  const height = spec.height ?? 480;
  const keys = spec.groupKeys ?? DEFAULT_RRMSE_GROUP;
  const groups = groupBy(rows as unknown as Record<string, unknown>[], keys) as unknown as Map<string, RrmseRow[]>;
  const Ls = [...new Set(rows.map((r) => r.L))].sort((a, b) => a - b);
  const maxR = Math.max(...rows.map((r) => r.rrmse_pct), 1);
  const x = linearScale(Ls[0], Ls[Ls.length - 1], MARGIN.left, width - MARGIN.right);
  const y = linearScale(0, maxR, height - MARGIN.bottom, MARGIN.top);
  const yTicks = [0, 0.25, 0.5, 0.75, 1].map((f) => f * maxR);
  const body: string[] = [
    axes(x, y, [Ls[0], Ls[Ls.length - 1]], [0, maxR], "L", "RRMSE (%)", width, height, Ls, yTicks),
  ];
  let i = 0;
  for (const [label, pts] of groups) {
    const sorted = [...pts].sort((a, b) => a.L - b.L);
    const color = PALETTE[i % PALETTE.length];
    const path = sorted
      .map((p) => `${x(p.L).toFixed(2)},${y(p.rrmse_pct).toFixed(2)}`)
      .join(" ");
    body.push(
      `<polyline points="${path}" fill="none" stroke="${color}" stroke-width="2" data-series="${label}"/>`,
    );
    for (const p of sorted) {
      body.push(
        `<circle cx="${x(p.L).toFixed(2)}" cy="${y(p.rrmse_pct).toFixed(2)}" r="3" fill="${color}"/>`,
      );
    }
    i += 1;
  }
  body.push(legend([...groups.keys()], width));
  return svgDocument(width, height, spec.title ?? "RRMSE vs pilot length", body.join("\n"));
}
