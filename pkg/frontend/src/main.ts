/**
 * plot_convergence <out.png|out.svg> <csv:label> [<csv:label> ...]
 *                  [--linear] [--x nodes_touched] [--title <text>]
 *
 * Draws one exploitability-convergence figure (log-log by default) with one
 * line per labeled CSV.  Repeating a label across several CSVs draws each
 * run faintly plus their pointwise mean as the labeled line.
 */

import { pathToFileURL } from "node:url";

import { CsvError } from "./csv.js";
import { PlotSpec, XColumn } from "./figure.js";
import { renderConvergence } from "./render.js";

export function parseArgs(argv: string[]): PlotSpec {
  const positional: string[] = [];
  let logLog = true;
  let xColumn: XColumn = "iteration";
  let title: string | undefined;
  for (let i = 0; i < argv.length; i++) {
    const arg = argv[i];
    if (arg === "--linear") {
      logLog = false;
    } else if (arg === "--x") {
      const value = argv[++i];
      if (value !== "iteration" && value !== "nodes_touched") {
        throw new CsvError(`--x expects iteration or nodes_touched, got ${value}`);
      }
      xColumn = value;
    } else if (arg === "--title") {
      title = argv[++i];
      if (title === undefined) throw new CsvError("--title expects a value");
    } else if (arg.startsWith("--")) {
      throw new CsvError(`unknown flag ${arg}`);
    } else {
      positional.push(arg);
    }
  }
  if (positional.length < 2) {
    throw new CsvError(
      "usage: plot_convergence <out.png|out.svg> <csv:label> [<csv:label> ...] " +
        "[--linear] [--x nodes_touched]",
    );
  }
  const [output, ...pairs] = positional;
  const inputs = pairs.map((pair) => {
    const cut = pair.lastIndexOf(":");
    if (cut <= 0 || cut === pair.length - 1) {
      throw new CsvError(`expected <csv-path>:<label>, got ${JSON.stringify(pair)}`);
    }
    return { path: pair.slice(0, cut), label: pair.slice(cut + 1) };
  });
  return { inputs, xColumn, logLog, output, title };
}

export function main(argv: string[]): number {
  let spec: PlotSpec;
  try {
    spec = parseArgs(argv);
  } catch (err) {
    console.error((err as Error).message);
    return 2;
  }
  try {
    const scene = renderConvergence(spec);
    const n = scene.series.filter((s) => s.inLegend).length;
    console.log(`wrote ${spec.output} (${n} series)`);
    return 0;
  } catch (err) {
    console.error((err as Error).message);
    return 1;
  }
}

if (process.argv[1] && import.meta.url === pathToFileURL(process.argv[1]).href) {
  process.exit(main(process.argv.slice(2)));
}
