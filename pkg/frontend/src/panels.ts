import * as fs from "node:fs";
import * as path from "node:path";

import { column, expectSchema, readTable, SchemaError, schemaOf, Table } from "./csv.js";
import { LINE_PALETTE, Rgb, symmetricLimit, zeroCenteredColor } from "./colormap.js";
import { encodePng } from "./png.js";
import { Raster } from "./raster.js";
import { textWidth } from "./font.js";

export type PanelType = "wigner_heatmap" | "line" | "multi_line";

export interface PanelSpec {
  panel_type: PanelType;
  inputs: string[];
  output: string;
  axis_labels?: { x?: string; y?: string };
  title?: string;
  /** Per-series legend labels; defaults derive from metadata. */
  labels?: string[];
  /** Column to plot from a moments table (default mean_n). */
  y_column?: string;
  /** Heatmap grid columns (default 3). */
  columns?: number;
}

const BLACK: Rgb = [0, 0, 0];
const GRAY: Rgb = [120, 120, 120];

export function validatePanelSpec(obj: unknown, baseDir: string): PanelSpec {
  if (typeof obj !== "object" || obj === null) {
    throw new SchemaError("panel spec must be a JSON object");
  }
  const spec = obj as Record<string, unknown>;
  const ptype = spec.panel_type;
  if (ptype !== "wigner_heatmap" && ptype !== "line" && ptype !== "multi_line") {
    throw new SchemaError(`panel_type must be wigner_heatmap | line | multi_line, got ${String(ptype)}`);
  }
  if (!Array.isArray(spec.inputs) || spec.inputs.length === 0) {
    throw new SchemaError("inputs must be a non-empty array of CSV paths");
  }
  if (typeof spec.output !== "string" || spec.output.length === 0) {
    throw new SchemaError("output must be an image path");
  }
  const inputs = (spec.inputs as string[]).map((p) => path.resolve(baseDir, p));
  for (const p of inputs) {
    if (!fs.existsSync(p)) throw new SchemaError(`input file does not exist: ${p}`);
  }
  const out: PanelSpec = {
    panel_type: ptype,
    inputs,
    output: path.resolve(baseDir, spec.output as string),
    axis_labels: (spec.axis_labels as PanelSpec["axis_labels"]) ?? {},
    title: spec.title as string | undefined,
    labels: spec.labels as string[] | undefined,
    y_column: spec.y_column as string | undefined,
    columns: spec.columns as number | undefined,
  };
  // fail now, not at render time, if a file does not carry its schema
  for (const p of out.inputs) {
    const table = readTable(p);
    if (out.panel_type === "wigner_heatmap") expectSchema(table, "wigner");
    else schemaOf(table);
  }
  return out;
}

export function loadPanelSpec(specPath: string): PanelSpec {
  let parsed: unknown;
  try {
    parsed = JSON.parse(fs.readFileSync(specPath, "utf-8"));
  } catch (err) {
    throw new SchemaError(`cannot parse ${specPath}: ${(err as Error).message}`);
  }
  return validatePanelSpec(parsed, path.dirname(specPath));
}

// --- series extraction ---------------------------------------------------------

interface Series {
  label: string;
  x: number[];
  y: number[];
}

function seriesFrom(table: Table, yColumn?: string): Series[] {
  const schema = schemaOf(table);
  const base = table.meta["scenario"] ?? path.basename(table.path, ".csv");
  if (schema === "visibility") {
    const tau = column(table, "tau");
    const nu = column(table, "nu");
    const x: number[] = [];
    const y: number[] = [];
    for (let i = 0; i < tau.length; i++) {
      if (tau[i] !== null && nu[i] !== null) {
        x.push(tau[i] as number);
        y.push(nu[i] as number); // no_fringe rows carry no nu and are skipped
      }
    }
    if (x.length === 0) throw new SchemaError(`${table.path}: no measurable visibility rows`);
    return [{ label: base, x, y }];
  }
  if (schema === "moments") {
    const ycol = yColumn ?? "mean_n";
    const tau = column(table, "tau");
    const vals = column(table, ycol);
    return [
      {
        label: base,
        x: tau.map((v) => v as number),
        y: vals.map((v) => v as number),
      },
    ];
  }
  if (schema === "negativity") {
    const tau = column(table, "tau");
    const vals = column(table, "negativity_volume");
    return [{ label: base, x: tau.map((v) => v as number), y: vals.map((v) => v as number) }];
  }
  if (schema === "pdensity") {
    const tau = column(table, "tau");
    const xs = column(table, "x");
    const ps = column(table, "p_of_x");
    const groups = new Map<number, Series>();
    for (let i = 0; i < tau.length; i++) {
      const t = tau[i] as number;
      if (!groups.has(t)) groups.set(t, { label: `tau=${fmt(t)}`, x: [], y: [] });
      const g = groups.get(t) as Series;
      g.x.push(xs[i] as number);
      g.y.push(ps[i] as number);
    }
    return [...groups.values()];
  }
  throw new SchemaError(`${table.path}: ${schema} tables cannot be drawn as lines`);
}

function fmt(v: number): string {
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 1e4 || a < 1e-3) return v.toExponential(1).replace("e", "e");
  const s = v.toPrecision(4);
  return s.includes(".") ? s.replace(/\.?0+$/, "") : s;
}

function niceTicks(lo: number, hi: number, target = 5): number[] {
  if (!(hi > lo)) return [lo];
  const rough = (hi - lo) / target;
  const mag = Math.pow(10, Math.floor(Math.log10(rough)));
  let step = mag;
  for (const m of [1, 2, 5, 10]) {
    if (m * mag >= rough) {
      step = m * mag;
      break;
    }
  }
  const ticks: number[] = [];
  for (let t = Math.ceil(lo / step) * step; t <= hi + 1e-12 * step; t += step) {
    ticks.push(Math.abs(t) < 1e-12 * step ? 0 : t);
  }
  return ticks;
}

// --- heatmap panel ---------------------------------------------------------------

interface Field {
  xs: number[];
  ps: number[];
  values: number[][]; // [ix][ip]
  tau: string;
  limit: number;
}

function fieldFrom(table: Table): Field {
  expectSchema(table, "wigner");
  const xcol = column(table, "x") as number[];
  const pcol = column(table, "p") as number[];
  const wcol = column(table, "w") as number[];
  const xs = [...new Set(xcol)].sort((a, b) => a - b);
  const ps = [...new Set(pcol)].sort((a, b) => a - b);
  if (xs.length * ps.length !== wcol.length) {
    throw new SchemaError(`${table.path}: ${wcol.length} rows do not fill a ${xs.length} x ${ps.length} grid`);
  }
  const xIndex = new Map(xs.map((v, i) => [v, i]));
  const pIndex = new Map(ps.map((v, i) => [v, i]));
  const values = xs.map(() => new Array(ps.length).fill(0));
  for (let i = 0; i < wcol.length; i++) {
    values[xIndex.get(xcol[i]) as number][pIndex.get(pcol[i]) as number] = wcol[i];
  }
  return {
    xs,
    ps,
    values,
    tau: table.meta["tau"] ?? "?",
    limit: symmetricLimit(wcol),
  };
}

function renderHeatmapGrid(spec: PanelSpec, scale: number): Raster {
  const fields = spec.inputs.map((p) => fieldFrom(readTable(p)));
  const cols = Math.min(spec.columns ?? 3, fields.length);
  const rows = Math.ceil(fields.length / cols);
  const cell = 210 * scale;
  const pad = 14 * scale;
  const top = (spec.title ? 30 : 12) * scale;
  const width = pad + cols * (cell + pad);
  const height = top + rows * (cell + 26 * scale) + pad;
  const img = new Raster(width, height);
  if (spec.title) {
    img.text(Math.max(pad, (width - textWidth(spec.title, 2 * scale)) / 2), 8 * scale, spec.title, BLACK, 2 * scale);
  }
  fields.forEach((field, k) => {
    const cx = pad + (k % cols) * (cell + pad);
    const cy = top + Math.floor(k / cols) * (cell + 26 * scale);
    // zero-centered diverging scale, limits +-max|w| per panel
    for (let py = 0; py < cell; py++) {
      const ip = Math.min(field.ps.length - 1, Math.floor(((cell - 1 - py) / cell) * field.ps.length));
      for (let px = 0; px < cell; px++) {
        const ix = Math.min(field.xs.length - 1, Math.floor((px / cell) * field.xs.length));
        img.set(cx + px, cy + py, zeroCenteredColor(field.values[ix][ip], field.limit));
      }
    }
    img.frame(cx, cy, cell, cell, BLACK);
    const caption = `tau=${field.tau}  max|w|=${fmt(field.limit)}`;
    img.text(cx, cy + cell + 6 * scale, caption, BLACK, scale);
  });
  return img;
}

// --- line panels ------------------------------------------------------------------

function renderLines(spec: PanelSpec, scale: number): Raster {
  let series: Series[] = [];
  for (const input of spec.inputs) {
    series = series.concat(seriesFrom(readTable(input), spec.y_column));
  }
  if (spec.panel_type === "line" && series.length !== 1) {
    throw new SchemaError(`line panel needs exactly one series, extracted ${series.length}`);
  }
  if (spec.labels) {
    spec.labels.forEach((label, i) => {
      if (i < series.length) series[i].label = label;
    });
  }
  const width = 520 * scale;
  const height = 360 * scale;
  const left = 58 * scale;
  const right = 14 * scale;
  const top = (spec.title ? 30 : 14) * scale;
  const bottom = 44 * scale;
  const pw = width - left - right;
  const ph = height - top - bottom;

  let xLo = Infinity, xHi = -Infinity, yLo = Infinity, yHi = -Infinity;
  for (const s of series) {
    for (const v of s.x) {
      xLo = Math.min(xLo, v);
      xHi = Math.max(xHi, v);
    }
    for (const v of s.y) {
      yLo = Math.min(yLo, v);
      yHi = Math.max(yHi, v);
    }
  }
  if (yLo > 0 && yLo / (yHi || 1) < 0.4) yLo = 0; // densities and visibilities read best from 0
  if (xHi === xLo) xHi = xLo + 1;
  if (yHi === yLo) yHi = yLo + 1;
  const sx = (v: number) => left + ((v - xLo) / (xHi - xLo)) * (pw - 1);
  const sy = (v: number) => top + ph - 1 - ((v - yLo) / (yHi - yLo)) * (ph - 1);

  const img = new Raster(width, height);
  if (spec.title) {
    img.text(Math.max(0, (width - textWidth(spec.title, 2 * scale)) / 2), 6 * scale, spec.title, BLACK, 2 * scale);
  }
  img.frame(left, top, pw, ph, BLACK);
  for (const t of niceTicks(xLo, xHi)) {
    const px = Math.round(sx(t));
    img.line(px, top + ph - 1, px, top + ph - 1 + 4 * scale, BLACK);
    const label = fmt(t);
    img.text(px - textWidth(label, scale) / 2, top + ph + 7 * scale, label, BLACK, scale);
  }
  for (const t of niceTicks(yLo, yHi)) {
    const py = Math.round(sy(t));
    img.line(left - 4 * scale, py, left - 1, py, BLACK);
    const label = fmt(t);
    img.text(left - 6 * scale - textWidth(label, scale), py - 3 * scale, label, BLACK, scale);
  }
  if (spec.axis_labels?.x) {
    img.text((width - textWidth(spec.axis_labels.x, scale)) / 2, height - 12 * scale, spec.axis_labels.x, BLACK, scale);
  }
  if (spec.axis_labels?.y) {
    img.textVertical(6 * scale, (height + textWidth(spec.axis_labels.y, scale)) / 2, spec.axis_labels.y, BLACK, scale);
  }
  series.forEach((s, i) => {
    const color = LINE_PALETTE[i % LINE_PALETTE.length];
    for (let k = 1; k < s.x.length; k++) {
      img.line(sx(s.x[k - 1]), sy(s.y[k - 1]), sx(s.x[k]), sy(s.y[k]), color, Math.max(1, scale));
    }
    if (s.x.length < 30) {
      for (let k = 0; k < s.x.length; k++) {
        img.rect(Math.round(sx(s.x[k])) - scale, Math.round(sy(s.y[k])) - scale, 2 * scale + 1, 2 * scale + 1, color);
      }
    }
  });
  // legend, top-right inside the axes
  const legendX = left + pw - 10 * scale;
  series.forEach((s, i) => {
    const color = LINE_PALETTE[i % LINE_PALETTE.length];
    const y = top + (8 + 11 * i) * scale;
    const w = textWidth(s.label, scale);
    img.rect(legendX - w - 16 * scale, y + 2 * scale, 10 * scale, 2 * scale, color);
    img.text(legendX - w - 2 * scale, y, s.label, GRAY, scale);
  });
  return img;
}

// --- entry point ------------------------------------------------------------------

export function renderPanel(spec: PanelSpec, dpi = 1): string {
  const scale = Math.max(1, Math.round(dpi));
  const img =
    spec.panel_type === "wigner_heatmap" ? renderHeatmapGrid(spec, scale) : renderLines(spec, scale);
  const png = encodePng(img.width, img.height, img.data);
  fs.mkdirSync(path.dirname(spec.output), { recursive: true });
  fs.writeFileSync(spec.output, png);
  return spec.output;
}
