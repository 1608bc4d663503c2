/**
 * Reader for the benchmark CLI's convergence CSVs.
 *
 * Expected header:
 *   run_id,game,algorithm,iteration,nodes_touched,elapsed_ms,br_vs_p1,br_vs_p2,exploit_avg
 */

import { readFileSync } from "node:fs";

export const EXPECTED_COLUMNS = [
  "run_id",
  "game",
  "algorithm",
  "iteration",
  "nodes_touched",
  "elapsed_ms",
  "br_vs_p1",
  "br_vs_p2",
  "exploit_avg",
] as const;

export type Column = (typeof EXPECTED_COLUMNS)[number];

export interface ConvergenceRow {
  run_id: string;
  game: string;
  algorithm: string;
  iteration: number;
  nodes_touched: number;
  elapsed_ms: number;
  br_vs_p1: number;
  br_vs_p2: number;
  exploit_avg: number;
}

export class CsvError extends Error {}

export function parseConvergenceCsv(text: string, source: string): ConvergenceRow[] {
  const lines = text.split(/\r?\n/).filter((line) => line.length > 0);
  if (lines.length === 0) {
    throw new CsvError(`${source}: file is empty`);
  }
  const header = lines[0].split(",");
  for (let i = 0; i < EXPECTED_COLUMNS.length; i++) {
    if (header[i] !== EXPECTED_COLUMNS[i]) {
      throw new CsvError(
        `${source}: column ${i + 1} is ${JSON.stringify(header[i] ?? "<missing>")}, ` +
          `expected ${JSON.stringify(EXPECTED_COLUMNS[i])}`,
      );
    }
  }
  if (header.length !== EXPECTED_COLUMNS.length) {
    throw new CsvError(
      `${source}: ${header.length} columns, expected ${EXPECTED_COLUMNS.length}`,
    );
  }
  if (lines.length === 1) {
    throw new CsvError(`${source}: no data rows`);
  }

  const rows: ConvergenceRow[] = [];
  for (let i = 1; i < lines.length; i++) {
    const parts = lines[i].split(",");
    if (parts.length !== EXPECTED_COLUMNS.length) {
      throw new CsvError(`${source}: row ${i + 1} has ${parts.length} fields`);
    }
    const num = (col: number): number => {
      const value = Number(parts[col]);
      if (!Number.isFinite(value)) {
        throw new CsvError(
          `${source}: row ${i + 1}, column ${EXPECTED_COLUMNS[col]}: ` +
            `${JSON.stringify(parts[col])} is not a number`,
        );
      }
      return value;
    };
    rows.push({
      run_id: parts[0],
      game: parts[1],
      algorithm: parts[2],
      iteration: num(3),
      nodes_touched: num(4),
      elapsed_ms: num(5),
      br_vs_p1: num(6),
      br_vs_p2: num(7),
      exploit_avg: num(8),
    });
  }
  return rows;
}

export function readConvergenceCsv(path: string): ConvergenceRow[] {
  let text: string;
  try {
    text = readFileSync(path, "utf8");
  } catch (err) {
    throw new CsvError(`cannot read ${path}: ${(err as Error).message}`);
  }
  return parseConvergenceCsv(text, path);
}
