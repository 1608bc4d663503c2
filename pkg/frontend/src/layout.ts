/** Scene layout: scales, axes, gridless ticks, legend, and data polylines. */

import { PlotSpec, Scene, Series, buildSeries } from "./figure.js";
import { Scale, linearScale, logScale } from "./scale.js";

const AXIS_COLOR = "#222222";
const TEXT_COLOR = "#222222";

export const CHAR_W = 6; // 5px glyph + 1px spacing at scale 1
export const CHAR_H = 7;

export function buildScene(spec: PlotSpec): Scene {
  const series = buildSeries(spec);
  const width = spec.width ?? 960;
  const height = spec.height ?? 600;
  const margin = { left: 70, right: 20, top: 28, bottom: 46 };
  const plot = {
    x0: margin.left,
    y0: margin.top,
    x1: width - margin.right,
    y1: height - margin.bottom,
  };

  const xs = series.flatMap((s) => s.points.map((p) => p.x));
  const ys = series.flatMap((s) => s.points.map((p) => p.y));
  if (xs.length === 0) {
    throw new Error("nothing to plot: every series is empty");
  }

  let xScale: Scale;
  let yScale: Scale;
  if (spec.logLog) {
    const posX = xs.filter((v) => v > 0);
    const posY = ys.filter((v) => v > 0);
    if (posX.length === 0 || posY.length === 0) {
      throw new Error("log-log axes need positive data; try --linear");
    }
    xScale = logScale(Math.min(...posX), Math.max(...posX), plot.x0, plot.x1);
    yScale = logScale(Math.min(...posY), Math.max(...posY), plot.y1, plot.y0);
  } else {
    xScale = linearScale(Math.min(...xs), Math.max(...xs), plot.x0, plot.x1);
    yScale = linearScale(Math.min(...ys), Math.max(...ys), plot.y1, plot.y0);
  }

  const scene: Scene = {
    width,
    height,
    background: "#ffffff",
    polylines: [],
    segments: [],
    texts: [],
    series,
  };

  // frame
  scene.segments.push(
    { x1: plot.x0, y1: plot.y1, x2: plot.x1, y2: plot.y1, color: AXIS_COLOR },
    { x1: plot.x0, y1: plot.y0, x2: plot.x0, y2: plot.y1, color: AXIS_COLOR },
  );

  for (const tick of xScale.ticks()) {
    const px = xScale.toPixel(tick.value);
    scene.segments.push({ x1: px, y1: plot.y1, x2: px, y2: plot.y1 + 5, color: AXIS_COLOR });
    scene.texts.push({
      x: px,
      y: plot.y1 + 9 + CHAR_H,
      text: tick.label,
      color: TEXT_COLOR,
      anchor: "middle",
    });
  }
  for (const tick of yScale.ticks()) {
    const py = yScale.toPixel(tick.value);
    scene.segments.push({ x1: plot.x0 - 5, y1: py, x2: plot.x0, y2: py, color: AXIS_COLOR });
    scene.texts.push({
      x: plot.x0 - 8,
      y: py + Math.floor(CHAR_H / 2),
      text: tick.label,
      color: TEXT_COLOR,
      anchor: "end",
    });
  }

  // axis titles
  scene.texts.push({
    x: (plot.x0 + plot.x1) / 2,
    y: height - 8,
    text: spec.xColumn,
    color: TEXT_COLOR,
    anchor: "middle",
  });
  scene.texts.push({
    x: plot.x0,
    y: plot.y0 - 8,
    text: spec.title ?? "exploit_avg",
    color: TEXT_COLOR,
    anchor: "start",
  });

  for (const s of series) {
    scene.polylines.push({
      points: s.points.map((p) => [xScale.toPixel(p.x), yScale.toPixel(p.y)]),
      color: s.color,
      faint: s.faint,
    });
  }

  // legend, top-right inside the plot area
  const legend = series.filter((s) => s.inLegend);
  legend.forEach((s, i) => {
    const y = plot.y0 + 12 + i * (CHAR_H + 6);
    const xText = plot.x1 - 10;
    scene.segments.push({
      x1: xText - s.label.length * CHAR_W - 26,
      y1: y - Math.floor(CHAR_H / 2) + 3,
      x2: xText - s.label.length * CHAR_W - 8,
      y2: y - Math.floor(CHAR_H / 2) + 3,
      color: s.color,
    });
    scene.texts.push({ x: xText, y: y, text: s.label, color: TEXT_COLOR, anchor: "end" });
  });

  return scene;
}
