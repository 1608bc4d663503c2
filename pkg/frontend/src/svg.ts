/** SVG rendering of a figure scene. */

import { Scene } from "./figure.js";
import { CHAR_H, CHAR_W } from "./layout.js";

function esc(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;");
}

export function renderSvg(scene: Scene): string {
  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${scene.width}" ` +
      `height="${scene.height}" viewBox="0 0 ${scene.width} ${scene.height}">`,
  );
  parts.push(
    `<rect width="${scene.width}" height="${scene.height}" fill="${scene.background}"/>`,
  );
  for (const seg of scene.segments) {
    parts.push(
      `<line x1="${seg.x1}" y1="${seg.y1}" x2="${seg.x2}" y2="${seg.y2}" ` +
        `stroke="${seg.color}" stroke-width="1"/>`,
    );
  }
  for (const line of scene.polylines) {
    const pts = line.points.map(([x, y]) => `${x.toFixed(2)},${y.toFixed(2)}`).join(" ");
    const opacity = line.faint ? 0.25 : 1.0;
    const width = line.faint ? 1 : 2;
    parts.push(
      `<polyline fill="none" stroke="${line.color}" stroke-width="${width}" ` +
        `stroke-opacity="${opacity}" points="${pts}"/>`,
    );
  }
  for (const t of scene.texts) {
    const anchor = t.anchor === "start" ? "start" : t.anchor === "end" ? "end" : "middle";
    parts.push(
      `<text x="${t.x}" y="${t.y}" fill="${t.color}" font-size="${CHAR_H + 4}" ` +
        `font-family="monospace" text-anchor="${anchor}">${esc(t.text)}</text>`,
    );
  }
  parts.push("</svg>");
  return parts.join("\n") + "\n";
}

export { CHAR_H, CHAR_W };
