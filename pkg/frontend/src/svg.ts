/** Deterministic SVG rendering (fixed style, no timestamps). */

import { ChartLayout } from "./chart.js";

function px(v: number): string {
  return v.toFixed(2);
}

function esc(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

export function renderSvg(chart: ChartLayout): string {
  const { plot } = chart;
  const out: string[] = [];
  out.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${chart.width}" height="${chart.height}" ` +
    `viewBox="0 0 ${chart.width} ${chart.height}" font-family="monospace" font-size="12">`,
  );
  out.push(`<rect width="${chart.width}" height="${chart.height}" fill="#ffffff"/>`);
  out.push(`<text x="${px(chart.width / 2)}" y="22" text-anchor="middle" font-size="15">${esc(chart.title)}</text>`);
  for (const t of chart.yTicks) {
    out.push(
      `<line x1="${px(plot.x0)}" y1="${px(t.pos)}" x2="${px(plot.x1)}" y2="${px(t.pos)}" ` +
      `stroke="#dddddd" stroke-width="1"/>`,
    );
    out.push(
      `<text x="${px(plot.x0 - 8)}" y="${px(t.pos + 4)}" text-anchor="end">${esc(t.label)}</text>`,
    );
  }
  for (const t of chart.xTicks) {
    out.push(
      `<line x1="${px(t.pos)}" y1="${px(plot.y1)}" x2="${px(t.pos)}" y2="${px(plot.y1 + 5)}" ` +
      `stroke="#444444" stroke-width="1"/>`,
    );
    out.push(
      `<text x="${px(t.pos)}" y="${px(plot.y1 + 20)}" text-anchor="middle">${esc(t.label)}</text>`,
    );
  }
  out.push(
    `<line x1="${px(plot.x0)}" y1="${px(plot.y0)}" x2="${px(plot.x0)}" y2="${px(plot.y1)}" ` +
    `stroke="#444444" stroke-width="1.5"/>`,
  );
  out.push(
    `<line x1="${px(plot.x0)}" y1="${px(plot.y1)}" x2="${px(plot.x1)}" y2="${px(plot.y1)}" ` +
    `stroke="#444444" stroke-width="1.5"/>`,
  );
  out.push(
    `<text x="${px((plot.x0 + plot.x1) / 2)}" y="${px(plot.y1 + 44)}" text-anchor="middle">` +
    `${esc(chart.xLabel)}</text>`,
  );
  out.push(
    `<text x="18" y="${px((plot.y0 + plot.y1) / 2)}" text-anchor="middle" ` +
    `transform="rotate(-90 18 ${px((plot.y0 + plot.y1) / 2)})">${esc(chart.yLabel)}</text>`,
  );
  for (const s of chart.series) {
    const pts = s.points.map(([x, y]) => `${px(x)},${px(y)}`).join(" ");
    out.push(`<polyline points="${pts}" fill="none" stroke="${s.color}" stroke-width="2"/>`);
    for (const [x, y] of s.points) {
      out.push(`<circle cx="${px(x)}" cy="${px(y)}" r="3" fill="${s.color}"/>`);
    }
  }
  // legend, top-right inside the plot
  const lx = plot.x1 - 170;
  let ly = plot.y0 + 10;
  out.push(
    `<rect x="${px(lx - 8)}" y="${px(ly - 6)}" width="178" height="${chart.series.length * 18 + 10}" ` +
    `fill="#ffffff" stroke="#bbbbbb"/>`,
  );
  for (const s of chart.series) {
    out.push(
      `<line x1="${px(lx)}" y1="${px(ly + 5)}" x2="${px(lx + 26)}" y2="${px(ly + 5)}" ` +
      `stroke="${s.color}" stroke-width="2"/>`,
    );
    out.push(`<text x="${px(lx + 34)}" y="${px(ly + 9)}" class="legend">${esc(s.label)}</text>`);
    ly += 18;
  }
  out.push("</svg>");
  return out.join("\n") + "\n";
}
