/** Seed-averaged figure data from sweep rows.
 *
 * The split-trend figures plot the averaged offloaded fraction (1 - split)
 * against the swept value; the comparison figure plots the averaged solver
 * objective per scheme. Rows with non-finite outcomes (infeasible points)
 * are excluded from the averages.
 */

import { SweepRow } from "./csv.js";

export const FIGURE_IDS = ["fig3a", "fig3b", "fig3c", "fig4"] as const;
export type FigureId = (typeof FIGURE_IDS)[number];

const SCHEME_ORDER = ["vha_irs", "vec_irs", "vha_no_irs"];

export interface Series {
  label: string;
  x: number[];
  y: number[];
}

export interface FigureData {
  figure: FigureId;
  xLabel: string;
  yLabel: string;
  logX: boolean;
  series: Series[];
}

export class AggregateError extends Error {}

function meanBy(rows: SweepRow[], value: (r: SweepRow) => number): Map<string, Map<number, number>> {
  const sums = new Map<string, Map<number, { s: number; n: number }>>();
  for (const row of rows) {
    const v = value(row);
    if (!Number.isFinite(v)) continue;
    let perScheme = sums.get(row.scheme);
    if (!perScheme) {
      perScheme = new Map();
      sums.set(row.scheme, perScheme);
    }
    let acc = perScheme.get(row.sweep_value);
    if (!acc) {
      acc = { s: 0, n: 0 };
      perScheme.set(row.sweep_value, acc);
    }
    acc.s += v;
    acc.n += 1;
  }
  const out = new Map<string, Map<number, number>>();
  for (const [scheme, perScheme] of sums) {
    const m = new Map<number, number>();
    for (const [x, acc] of perScheme) m.set(x, acc.s / acc.n);
    out.set(scheme, m);
  }
  return out;
}

export function aggregate(rows: SweepRow[], figure: FigureId): FigureData {
  const selected = rows.filter((r) => r.sweep_id === figure);
  if (selected.length === 0) {
    throw new AggregateError(`no rows for figure ${figure}`);
  }
  const splitTrend = figure !== "fig4";
  const means = meanBy(selected, splitTrend ? (r) => 1 - r.split : (r) => r.objective_s);
  const schemes = [...means.keys()].sort(
    (a, b) => (SCHEME_ORDER.indexOf(a) + 100) - (SCHEME_ORDER.indexOf(b) + 100),
  );
  const series: Series[] = [];
  for (const scheme of schemes) {
    const perScheme = means.get(scheme)!;
    const xs = [...perScheme.keys()].sort((a, b) => a - b);
    series.push({ label: scheme, x: xs, y: xs.map((x) => perScheme.get(x)!) });
  }
  const axis: Record<FigureId, { xLabel: string; yLabel: string; logX: boolean }> = {
    fig3a: { xLabel: "local cpu (cycles/s)", yLabel: "offloaded fraction", logX: true },
    fig3b: { xLabel: "cycle density (cycles/bit)", yLabel: "offloaded fraction", logX: false },
    fig3c: { xLabel: "data size (bits)", yLabel: "offloaded fraction", logX: true },
    fig4: { xLabel: "data size (bits)", yLabel: "completion time objective (s)", logX: true },
  };
  return { figure, series, ...axis[figure] };
}
