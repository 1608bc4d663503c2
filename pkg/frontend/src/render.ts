/** Scene-to-file rendering: SVG for .svg paths, PNG otherwise. */

import { writeFileSync } from "node:fs";

import { PlotSpec, Scene } from "./figure.js";
import { buildScene } from "./layout.js";
import { Raster, drawText, encodePng, parseColor } from "./raster.js";
import { renderSvg } from "./svg.js";

export function renderPngBuffer(scene: Scene): Buffer {
  const raster = new Raster(scene.width, scene.height);
  for (const seg of scene.segments) {
    raster.line(seg.x1, seg.y1, seg.x2, seg.y2, parseColor(seg.color));
  }
  for (const line of scene.polylines) {
    const rgb = parseColor(line.color);
    const alpha = line.faint ? 0.3 : 1.0;
    const thick = line.faint ? 1 : 2;
    for (let i = 1; i < line.points.length; i++) {
      const [x1, y1] = line.points[i - 1];
      const [x2, y2] = line.points[i];
      raster.line(x1, y1, x2, y2, rgb, alpha, thick);
    }
  }
  for (const t of scene.texts) {
    drawText(raster, t.x, t.y, t.text, parseColor(t.color), t.anchor);
  }
  return encodePng(raster);
}

/** Render one convergence figure; returns the scene for inspection. */
export function renderConvergence(spec: PlotSpec): Scene {
  const scene = buildScene(spec);
  if (spec.output.toLowerCase().endsWith(".svg")) {
    writeFileSync(spec.output, renderSvg(scene));
  } else {
    writeFileSync(spec.output, renderPngBuffer(scene));
  }
  return scene;
}
