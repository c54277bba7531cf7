/** Minimal deterministic PNG rendering: own rasterizer plus encoder.
 *
 * Text uses a 5x7 bitmap font (column bytes, least significant bit on top);
 * the encoder writes 8-bit RGBA with filter 0 rows through zlib at a fixed
 * level, so identical charts give identical bytes.
 */

import { deflateSync } from "node:zlib";

import { ChartLayout } from "./chart.js";

const FONT: Record<string, number[]> = {
  " ": [0x00, 0x00, 0x00, 0x00, 0x00],
  "(": [0x00, 0x1c, 0x22, 0x41, 0x00],
  ")": [0x00, 0x41, 0x22, 0x1c, 0x00],
  "+": [0x08, 0x08, 0x3e, 0x08, 0x08],
  "-": [0x08, 0x08, 0x08, 0x08, 0x08],
  ".": [0x00, 0x60, 0x60, 0x00, 0x00],
  "/": [0x20, 0x10, 0x08, 0x04, 0x02],
  "_": [0x40, 0x40, 0x40, 0x40, 0x40],
  "0": [0x3e, 0x51, 0x49, 0x45, 0x3e],
  "1": [0x00, 0x42, 0x7f, 0x40, 0x00],
  "2": [0x42, 0x61, 0x51, 0x49, 0x46],
  "3": [0x21, 0x41, 0x45, 0x4b, 0x31],
  "4": [0x18, 0x14, 0x12, 0x7f, 0x10],
  "5": [0x27, 0x45, 0x45, 0x45, 0x39],
  "6": [0x3c, 0x4a, 0x49, 0x49, 0x30],
  "7": [0x01, 0x71, 0x09, 0x05, 0x03],
  "8": [0x36, 0x49, 0x49, 0x49, 0x36],
  "9": [0x06, 0x49, 0x49, 0x29, 0x1e],
  a: [0x20, 0x54, 0x54, 0x54, 0x78],
  b: [0x7f, 0x48, 0x44, 0x44, 0x38],
  c: [0x38, 0x44, 0x44, 0x44, 0x20],
  d: [0x38, 0x44, 0x44, 0x48, 0x7f],
  e: [0x38, 0x54, 0x54, 0x54, 0x18],
  f: [0x08, 0x7e, 0x09, 0x01, 0x02],
  g: [0x0c, 0x52, 0x52, 0x52, 0x3e],
  h: [0x7f, 0x08, 0x04, 0x04, 0x78],
  i: [0x00, 0x44, 0x7d, 0x40, 0x00],
  j: [0x20, 0x40, 0x44, 0x3d, 0x00],
  k: [0x7f, 0x10, 0x28, 0x44, 0x00],
  l: [0x00, 0x41, 0x7f, 0x40, 0x00],
  m: [0x7c, 0x04, 0x18, 0x04, 0x78],
  n: [0x7c, 0x08, 0x04, 0x04, 0x78],
  o: [0x38, 0x44, 0x44, 0x44, 0x38],
  p: [0x7c, 0x14, 0x14, 0x14, 0x08],
  q: [0x08, 0x14, 0x14, 0x18, 0x7c],
  r: [0x7c, 0x08, 0x04, 0x04, 0x08],
  s: [0x48, 0x54, 0x54, 0x54, 0x20],
  t: [0x04, 0x3f, 0x44, 0x40, 0x20],
  u: [0x3c, 0x40, 0x40, 0x20, 0x7c],
  v: [0x1c, 0x20, 0x40, 0x20, 0x1c],
  w: [0x3c, 0x40, 0x30, 0x40, 0x3c],
  x: [0x44, 0x28, 0x10, 0x28, 0x44],
  y: [0x0c, 0x50, 0x50, 0x50, 0x3c],
  z: [0x44, 0x64, 0x54, 0x4c, 0x44],
};
const UNKNOWN = [0x7f, 0x41, 0x41, 0x41, 0x7f];

type RGB = [number, number, number];

function hexColor(text: string): RGB {
  return [
    parseInt(text.slice(1, 3), 16),
    parseInt(text.slice(3, 5), 16),
    parseInt(text.slice(5, 7), 16),
  ];
}

class Raster {
  data: Uint8Array;

  constructor(readonly width: number, readonly height: number) {
    this.data = new Uint8Array(width * height * 4).fill(255);
  }

  set(x: number, y: number, [r, g, b]: RGB): void {
    x = Math.round(x);
    y = Math.round(y);
    if (x < 0 || y < 0 || x >= this.width || y >= this.height) return;
    const o = (y * this.width + x) * 4;
    this.data[o] = r;
    this.data[o + 1] = g;
    this.data[o + 2] = b;
    this.data[o + 3] = 255;
  }

  fillRect(x0: number, y0: number, w: number, h: number, c: RGB): void {
    for (let y = y0; y < y0 + h; y++) {
      for (let x = x0; x < x0 + w; x++) this.set(x, y, c);
    }
  }

  line(x0: number, y0: number, x1: number, y1: number, c: RGB, thick = 1): void {
    let ix0 = Math.round(x0), iy0 = Math.round(y0);
    const ix1 = Math.round(x1), iy1 = Math.round(y1);
    const dx = Math.abs(ix1 - ix0), dy = -Math.abs(iy1 - iy0);
    const sx = ix0 < ix1 ? 1 : -1, sy = iy0 < iy1 ? 1 : -1;
    let err = dx + dy;
    for (;;) {
      for (let ox = 0; ox < thick; ox++) {
        for (let oy = 0; oy < thick; oy++) this.set(ix0 + ox, iy0 + oy, c);
      }
      if (ix0 === ix1 && iy0 === iy1) break;
      const e2 = 2 * err;
      if (e2 >= dy) {
        err += dy;
        ix0 += sx;
      }
      if (e2 <= dx) {
        err += dx;
        iy0 += sy;
      }
    }
  }

  disc(cx: number, cy: number, r: number, c: RGB): void {
    for (let y = -r; y <= r; y++) {
      for (let x = -r; x <= r; x++) {
        if (x * x + y * y <= r * r) this.set(cx + x, cy + y, c);
      }
    }
  }

  text(x: number, y: number, s: string, c: RGB): void {
    let cx = Math.round(x);
    const top = Math.round(y);
    for (const ch of s) {
      const glyph = FONT[ch] ?? FONT[ch.toLowerCase()] ?? UNKNOWN;
      for (let col = 0; col < 5; col++) {
        const bits = glyph[col];
        for (let row = 0; row < 7; row++) {
          if (bits & (1 << row)) this.set(cx + col, top + row, c);
        }
      }
      cx += 6;
    }
  }

  textWidth(s: string): number {
    return s.length * 6 - 1;
  }
}

// -- PNG encoding -------------------------------------------------------------

const CRC_TABLE = (() => {
  const table = new Uint32Array(256);
  for (let n = 0; n < 256; n++) {
    let c = n;
    for (let k = 0; k < 8; k++) c = c & 1 ? 0xedb88320 ^ (c >>> 1) : c >>> 1;
    table[n] = c >>> 0;
  }
  return table;
})();

function crc32(buf: Uint8Array): number {
  let c = 0xffffffff;
  for (let i = 0; i < buf.length; i++) c = CRC_TABLE[(c ^ buf[i]) & 0xff] ^ (c >>> 8);
  return (c ^ 0xffffffff) >>> 0;
}

function chunk(type: string, payload: Uint8Array): Buffer {
  const head = Buffer.alloc(8);
  head.writeUInt32BE(payload.length, 0);
  head.write(type, 4, "ascii");
  const body = Buffer.concat([Buffer.from(type, "ascii"), Buffer.from(payload)]);
  const tail = Buffer.alloc(4);
  tail.writeUInt32BE(crc32(body), 0);
  return Buffer.concat([head, Buffer.from(payload.length ? body.subarray(4) : []), tail]);
}

function encodePng(raster: Raster): Buffer {
  const { width, height, data } = raster;
  const raw = Buffer.alloc((width * 4 + 1) * height);
  for (let y = 0; y < height; y++) {
    const o = y * (width * 4 + 1);
    raw[o] = 0; // filter: none
    Buffer.from(data.buffer, y * width * 4, width * 4).copy(raw, o + 1);
  }
  const ihdr = Buffer.alloc(13);
  ihdr.writeUInt32BE(width, 0);
  ihdr.writeUInt32BE(height, 4);
  ihdr[8] = 8; // bit depth
  ihdr[9] = 6; // RGBA
  const idat = deflateSync(raw, { level: 9 });
  return Buffer.concat([
    Buffer.from([0x89, 0x50, 0x4e, 0x47, 0x0d, 0x0a, 0x1a, 0x0a]),
    chunk("IHDR", ihdr),
    chunk("IDAT", idat),
    chunk("IEND", new Uint8Array(0)),
  ]);
}

// -- chart drawing --------------------------------------------------------------

const AXIS: RGB = [68, 68, 68];
const GRID: RGB = [221, 221, 221];
const TEXT: RGB = [16, 16, 16];

export function renderPng(chart: ChartLayout): Buffer {
  const r = new Raster(chart.width, chart.height);
  const { plot } = chart;
  r.text(chart.width / 2 - r.textWidth(chart.title) / 2, 14, chart.title, TEXT);
  for (const t of chart.yTicks) {
    r.line(plot.x0, t.pos, plot.x1, t.pos, GRID);
    r.text(plot.x0 - 10 - r.textWidth(t.label), t.pos - 3, t.label, TEXT);
  }
  for (const t of chart.xTicks) {
    r.line(t.pos, plot.y1, t.pos, plot.y1 + 5, AXIS);
    r.text(t.pos - r.textWidth(t.label) / 2, plot.y1 + 10, t.label, TEXT);
  }
  r.line(plot.x0, plot.y0, plot.x0, plot.y1, AXIS, 2);
  r.line(plot.x0, plot.y1, plot.x1, plot.y1, AXIS, 2);
  r.text((plot.x0 + plot.x1) / 2 - r.textWidth(chart.xLabel) / 2, plot.y1 + 34, chart.xLabel, TEXT);
  r.text(8, plot.y0 - 18, chart.yLabel, TEXT);
  for (const s of chart.series) {
    const color = hexColor(s.color);
    for (let i = 1; i < s.points.length; i++) {
      r.line(s.points[i - 1][0], s.points[i - 1][1], s.points[i][0], s.points[i][1], color, 2);
    }
    for (const [x, y] of s.points) r.disc(Math.round(x), Math.round(y), 3, color);
  }
  const lx = plot.x1 - 170;
  let ly = plot.y0 + 6;
  r.fillRect(lx - 8, ly - 6, 178, chart.series.length * 16 + 10, [255, 255, 255]);
  r.line(lx - 8, ly - 6, lx + 170, ly - 6, GRID);
  for (const s of chart.series) {
    const color = hexColor(s.color);
    r.line(lx, ly + 3, lx + 24, ly + 3, color, 2);
    r.text(lx + 32, ly, s.label, TEXT);
    ly += 16;
  }
  return encodePng(r);
}
