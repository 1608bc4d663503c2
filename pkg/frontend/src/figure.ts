/**
 * Figure construction: benchmark CSV rows in, a resolution-independent
 * scene of polylines/segments/texts out.  Rendering backends (SVG, PNG)
 * draw the scene without touching the data again.
 *
 * Repeating a label across several input files groups them: each file is
 * drawn as a faint line and their pointwise mean (checkpoints are aligned
 * by row index) as the labeled solid line, which is how multi-seed sampled
 * runs are displayed.
 */

import { ConvergenceRow, readConvergenceCsv } from "./csv.js";

export type XColumn = "iteration" | "nodes_touched";

export interface PlotSpec {
  inputs: { path: string; label: string }[];
  xColumn: XColumn;
  logLog: boolean;
  output: string;
  width?: number;
  height?: number;
  title?: string;
}

export interface SeriesPoint {
  x: number;
  y: number;
}

export interface Series {
  label: string;
  points: SeriesPoint[];
  color: string;
  faint: boolean;
  inLegend: boolean;
}

export interface SceneText {
  x: number;
  y: number;
  text: string;
  color: string;
  anchor: "start" | "middle" | "end";
}

export interface SceneSegment {
  x1: number;
  y1: number;
  x2: number;
  y2: number;
  color: string;
}

export interface Scene {
  width: number;
  height: number;
  background: string;
  polylines: { points: [number, number][]; color: string; faint: boolean }[];
  segments: SceneSegment[];
  texts: SceneText[];
  series: Series[];
}

export const PALETTE = [
  "#1f77b4",
  "#d62728",
  "#2ca02c",
  "#9467bd",
  "#ff7f0e",
  "#8c564b",
  "#17becf",
  "#7f7f7f",
];

export function buildSeries(spec: PlotSpec): Series[] {
  const groups = new Map<string, ConvergenceRow[][]>();
  const order: string[] = [];
  for (const input of spec.inputs) {
    const rows = readConvergenceCsv(input.path);
    if (!groups.has(input.label)) {
      groups.set(input.label, []);
      order.push(input.label);
    }
    groups.get(input.label)!.push(rows);
  }

  const series: Series[] = [];
  order.forEach((label, i) => {
    const runs = groups.get(label)!;
    const color = PALETTE[i % PALETTE.length];
    const toPoints = (rows: ConvergenceRow[]): SeriesPoint[] =>
      rows.map((r) => ({ x: r[spec.xColumn], y: r.exploit_avg }));
    if (runs.length === 1) {
      series.push({
        label,
        points: toPoints(runs[0]),
        color,
        faint: false,
        inLegend: true,
      });
      return;
    }
    // multi-run group: faint individual curves plus their pointwise mean
    for (const rows of runs) {
      series.push({
        label,
        points: toPoints(rows),
        color,
        faint: true,
        inLegend: false,
      });
    }
    const n = Math.min(...runs.map((rows) => rows.length));
    const mean: SeriesPoint[] = [];
    for (let k = 0; k < n; k++) {
      const xs = runs.map((rows) => rows[k][spec.xColumn]);
      const ys = runs.map((rows) => rows[k].exploit_avg);
      mean.push({
        x: xs.reduce((a, b) => a + b, 0) / xs.length,
        y: ys.reduce((a, b) => a + b, 0) / ys.length,
      });
    }
    series.push({ label, points: mean, color, faint: false, inLegend: true });
  });
  return series;
}
