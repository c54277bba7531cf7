/** Shared chart geometry for the SVG and PNG renderers. */

import { FigureData } from "./aggregate.js";

export const WIDTH = 760;
export const HEIGHT = 520;
const MARGIN = { left: 84, right: 24, top: 40, bottom: 64 };

export const PALETTE = ["#1f6fb2", "#c54a2c", "#3a9040", "#7d4fa8", "#9a7b2d"];

export interface Tick {
  pos: number;
  label: string;
}

export interface PixelSeries {
  label: string;
  color: string;
  points: Array<[number, number]>;
}

export interface ChartLayout {
  width: number;
  height: number;
  plot: { x0: number; y0: number; x1: number; y1: number };
  xTicks: Tick[];
  yTicks: Tick[];
  xLabel: string;
  yLabel: string;
  title: string;
  series: PixelSeries[];
}

/** Compact deterministic number text: 123, 0.25, 1.5e7. */
export function fmt(value: number): string {
  if (value === 0) return "0";
  const a = Math.abs(value);
  let text: string;
  if (a >= 1e5 || a < 1e-3) {
    const exp = Math.floor(Math.log10(a));
    const mant = value / Math.pow(10, exp);
    const m = Number(mant.toPrecision(3));
    text = `${m}e${exp}`;
  } else {
    text = Number(value.toPrecision(4)).toString();
  }
  return text;
}

function niceTicks(lo: number, hi: number, count: number): number[] {
  if (!(hi > lo)) {
    const pad = Math.abs(lo) > 0 ? Math.abs(lo) * 0.5 : 1;
    lo -= pad;
    hi += pad;
  }
  const rawStep = (hi - lo) / Math.max(count - 1, 1);
  const mag = Math.pow(10, Math.floor(Math.log10(rawStep)));
  let step = mag;
  for (const m of [1, 2, 2.5, 5, 10]) {
    if (mag * m >= rawStep) {
      step = mag * m;
      break;
    }
  }
  const first = Math.ceil(lo / step) * step;
  const ticks: number[] = [];
  for (let v = first; v <= hi + step * 1e-9; v += step) {
    ticks.push(Number(v.toPrecision(12)));
  }
  return ticks;
}

export function layoutChart(data: FigureData): ChartLayout {
  const plot = {
    x0: MARGIN.left,
    y0: MARGIN.top,
    x1: WIDTH - MARGIN.right,
    y1: HEIGHT - MARGIN.bottom,
  };
  const xsAll = data.series.flatMap((s) => s.x);
  const ysAll = data.series.flatMap((s) => s.y);
  const xv = data.logX ? xsAll.map(Math.log10) : xsAll;
  let xLo = Math.min(...xv);
  let xHi = Math.max(...xv);
  if (xHi === xLo) {
    xLo -= 1;
    xHi += 1;
  }
  let yLo = Math.min(...ysAll, 0);
  let yHi = Math.max(...ysAll);
  if (yHi === yLo) yHi = yLo + 1;
  const ySpan = yHi - yLo;
  yHi += 0.06 * ySpan;

  const xPos = (x: number) => {
    const v = data.logX ? Math.log10(x) : x;
    return plot.x0 + ((v - xLo) / (xHi - xLo)) * (plot.x1 - plot.x0);
  };
  const yPos = (y: number) => plot.y1 - ((y - yLo) / (yHi - yLo)) * (plot.y1 - plot.y0);

  const xTickValues = [...new Set(xsAll)].sort((a, b) => a - b);
  const shown = xTickValues.length > 10
    ? xTickValues.filter((_, i) => i % Math.ceil(xTickValues.length / 10) === 0)
    : xTickValues;
  const xTicks = shown.map((v) => ({ pos: xPos(v), label: fmt(v) }));
  const yTicks = niceTicks(yLo, yHi, 6).map((v) => ({ pos: yPos(v), label: fmt(v) }));

  const series: PixelSeries[] = data.series.map((s, i) => ({
    label: s.label,
    color: PALETTE[i % PALETTE.length],
    points: s.x.map((x, j) => [xPos(x), yPos(s.y[j])] as [number, number]),
  }));

  return {
    width: WIDTH,
    height: HEIGHT,
    plot,
    xTicks,
    yTicks,
    xLabel: data.xLabel,
    yLabel: data.yLabel,
    title: data.figure,
    series,
  };
}
