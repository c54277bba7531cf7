export { CSV_COLUMNS, CsvError, parseSweepCsv } from "./csv.js";
export type { SweepRow } from "./csv.js";
export { AggregateError, FIGURE_IDS, aggregate } from "./aggregate.js";
export type { FigureData, FigureId, Series } from "./aggregate.js";
export { fmt, layoutChart } from "./chart.js";
export type { ChartLayout } from "./chart.js";
export { renderSvg } from "./svg.js";
export { renderPng } from "./png.js";
export { run } from "./cli.js";
