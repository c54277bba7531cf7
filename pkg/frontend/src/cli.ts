#!/usr/bin/env node
/** plotfig <figure_id> --csv <path> --out <path> [--format png|svg]
 *
 * Exit codes: 0 ok, 1 usage error, 2 data/configuration error.
 */

import { readFileSync, writeFileSync } from "node:fs";

import { AggregateError, FIGURE_IDS, FigureId, aggregate } from "./aggregate.js";
import { layoutChart } from "./chart.js";
import { CsvError, parseSweepCsv } from "./csv.js";
import { renderPng } from "./png.js";
import { renderSvg } from "./svg.js";

const USAGE = "usage: plotfig <fig3a|fig3b|fig3c|fig4> --csv <path> --out <path> [--format png|svg]";

interface Args {
  figure: FigureId;
  csv: string;
  out: string;
  format: "png" | "svg";
}

function parseArgs(argv: string[]): Args {
  if (argv.length === 0) throw new UsageError("missing figure id");
  const [figure, ...rest] = argv;
  if (!(FIGURE_IDS as readonly string[]).includes(figure)) {
    throw new UsageError(`unknown figure id ${JSON.stringify(figure)}`);
  }
  let csv: string | undefined;
  let out: string | undefined;
  let format: string | undefined;
  for (let i = 0; i < rest.length; i += 2) {
    const flag = rest[i];
    const value = rest[i + 1];
    if (value === undefined) throw new UsageError(`flag ${flag} needs a value`);
    if (flag === "--csv") csv = value;
    else if (flag === "--out") out = value;
    else if (flag === "--format") format = value;
    else throw new UsageError(`unknown flag ${flag}`);
  }
  if (!csv) throw new UsageError("--csv is required");
  if (!out) throw new UsageError("--out is required");
  if (format === undefined) {
    format = out.endsWith(".png") ? "png" : "svg";
  }
  if (format !== "png" && format !== "svg") {
    throw new UsageError(`--format must be png or svg, got ${JSON.stringify(format)}`);
  }
  return { figure: figure as FigureId, csv, out, format };
}

class UsageError extends Error {}

export function run(argv: string[]): number {
  let args: Args;
  try {
    args = parseArgs(argv);
  } catch (err) {
    if (err instanceof UsageError) {
      process.stderr.write(`error: ${err.message}\n${USAGE}\n`);
      return 1;
    }
    throw err;
  }
  try {
    const text = readFileSync(args.csv, "utf8");
    const rows = parseSweepCsv(text);
    const chart = layoutChart(aggregate(rows, args.figure));
    const payload = args.format === "svg" ? renderSvg(chart) : renderPng(chart);
    writeFileSync(args.out, payload);
    process.stdout.write(`wrote ${args.out}\n`);
    return 0;
  } catch (err) {
    if (err instanceof CsvError || err instanceof AggregateError) {
      process.stderr.write(`error: ${err.message}\n`);
      return 2;
    }
    if (err instanceof Error && (err as NodeJS.ErrnoException).code === "ENOENT") {
      process.stderr.write(`error: ${err.message}\n`);
      return 2;
    }
    throw err;
  }
}

const invokedDirectly = process.argv[1] !== undefined
  && import.meta.url === new URL(`file://${process.argv[1]}`).href;
if (invokedDirectly) {
  process.exit(run(process.argv.slice(2)));
}
