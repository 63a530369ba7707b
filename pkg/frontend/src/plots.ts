import { basename, dirname, extname } from "path";
import { column, hasColumn, readCsv, MissingColumnError, Table } from "./csv.js";
import { hasField, numberArray, readJson, stringField } from "./artifacts.js";
import { FigureSpec } from "./figspec.js";
import {
  Frame,
  PALETTE,
  PANEL_HEIGHT,
  PANEL_WIDTH,
  Series,
  panel,
  svgDocument,
  tickLabel,
} from "./svg.js";

function stem(path: string): string {
  return basename(path, extname(path));
}

/** "runs/fig-3.2-c0.4/timeseries.csv" -> "fig-3.2-c0.4: timeseries". */
function defaultTitle(path: string): string {
  const parent = basename(dirname(path));
  const name = stem(path);
  return parent === "." || parent === "" ? name : `${parent}: ${name}`;
}

const FULL: Frame = { left: 0, top: 0, width: PANEL_WIDTH, height: PANEL_HEIGHT };

function renderSnapshot(spec: FigureSpec): string {
  const table = readCsv(spec.sources[0]);
  const eta = column(table, "eta");
  const v = column(table, "v");
  const h = column(table, "h");

  const half = 330;
  const top = panel({
    frame: { left: 0, top: 0, width: PANEL_WIDTH, height: half },
    series: [{ x: eta, y: h, mark: "line", color: PALETTE[0] }],
    title: spec.labels?.title ?? defaultTitle(spec.sources[0]),
    yLabel: "density",
  });
  const bottom = panel({
    frame: { left: 0, top: half, width: PANEL_WIDTH, height: half },
    series: [{ x: eta, y: v, mark: "line", color: PALETTE[1] }],
    xLabel: spec.labels?.x ?? "position",
    yLabel: spec.labels?.y ?? "velocity",
    zeroLine: true,
  });
  return svgDocument(PANEL_WIDTH, 2 * half, top + bottom);
}

function pickLogColumns(spec: FigureSpec, table: Table): string[] {
  if (spec.columns) return spec.columns;
  for (const name of ["rv_support", "Rv", "sup_speed"]) {
    if (hasColumn(table, name)) return [name];
  }
  throw new MissingColumnError("rv_support", table.file);
}

function renderTimeseriesLog(spec: FigureSpec): string {
  const table = readCsv(spec.sources[0]);
  const t = column(table, "t");
  const names = pickLogColumns(spec, table);

  const series: Series[] = names.map((name, i) => ({
    label: name,
    x: t,
    y: column(table, name),
    mark: "line",
    color: PALETTE[i % PALETTE.length],
  }));
  for (const s of series) {
    if (!s.y.some((y) => Number.isFinite(y) && y > 0)) {
      throw new Error(
        `column "${s.label}" in ${basename(table.file)} has no positive values for a log scale`);
    }
  }
  const body = panel({
    frame: FULL,
    series,
    title: spec.labels?.title ?? defaultTitle(spec.sources[0]),
    xLabel: spec.labels?.x ?? "t",
    yLabel: spec.labels?.y ?? names.join(", "),
    yLog: true,
  });
  return svgDocument(PANEL_WIDTH, PANEL_HEIGHT, body);
}

function renderThresholdCurve(spec: FigureSpec): string {
  const curves = readJson(spec.sources[0]);
  const x = numberArray(curves, "x");
  const du0 = numberArray(curves, "du0");

  const series: Series[] = [];
  if (hasField(curves, "psi_conv")) {
    const conv = numberArray(curves, "psi_conv");
    series.push({
      label: "du0 + psi_conv",
      x,
      y: du0.map((d, i) => d + conv[i]),
      mark: "line",
      color: PALETTE[0],
    });
  } else {
    series.push({ label: "du0", x, y: du0, mark: "line", color: PALETTE[0] });
  }
  for (const name of ["sigma_plus", "sigma_minus"]) {
    if (hasField(curves, name)) {
      series.push({
        label: name,
        x,
        y: numberArray(curves, name),
        mark: "line",
        color: name === "sigma_plus" ? PALETTE[1] : PALETTE[3],
        dash: "5,3",
      });
    }
  }

  let title = spec.labels?.title ?? defaultTitle(spec.sources[0]);
  if (spec.sources.length > 1) {
    const verdict = readJson(spec.sources[1]);
    const region = stringField(verdict, "region");
    if (region) title += ` [${region}]`;
  }
  const body = panel({
    frame: FULL,
    series,
    title,
    xLabel: spec.labels?.x ?? "x",
    yLabel: spec.labels?.y ?? "initial slope vs thresholds",
    zeroLine: true,
  });
  return svgDocument(PANEL_WIDTH, PANEL_HEIGHT, body);
}

interface ParticleColumns {
  n: number;
  d: number;
  x: number[][];
  v: number[][] | null;
}

/** Positions and velocities at the last sample of a trajectory table. */
function finalParticleState(table: Table): ParticleColumns {
  let n = 0;
  let d = 0;
  for (const name of table.header) {
    const m = /^x(\d+)_(\d+)$/.exec(name);
    if (!m) continue;
    n = Math.max(n, parseInt(m[1], 10) + 1);
    d = Math.max(d, parseInt(m[2], 10) + 1);
  }
  if (n === 0) {
    throw new MissingColumnError("x0_0", table.file);
  }
  const x: number[][] = [];
  for (let i = 0; i < n; i++) {
    x.push(column(table, `x${i}_0`).slice(-1).concat(
      d > 1 ? column(table, `x${i}_1`).slice(-1) : []));
  }
  let v: number[][] | null = null;
  if (hasColumn(table, "v0_0")) {
    v = [];
    for (let i = 0; i < n; i++) {
      v.push(column(table, `v${i}_0`).slice(-1).concat(
        d > 1 ? column(table, `v${i}_1`).slice(-1) : []));
    }
  }
  return { n, d, x, v };
}

function renderParticleScatter(spec: FigureSpec): string {
  const table = readCsv(spec.sources[0]);
  const t = column(table, "t");
  const state = finalParticleState(table);
  const tFinal = t[t.length - 1];

  const series: Series[] = [];
  let xLabel: string;
  let yLabel: string;
  if (state.d >= 2) {
    const px = state.x.map((p) => p[0]);
    const py = state.x.map((p) => p[1]);
    if (state.v) {
      // short velocity whiskers, scaled so the fastest spans ~6% of the cloud
      const span = Math.max(
        Math.max(...px) - Math.min(...px), Math.max(...py) - Math.min(...py), 1e-12);
      const vmax = Math.max(...state.v.map((w) => Math.hypot(w[0], w[1])), 1e-12);
      const scale = (0.06 * span) / vmax;
      const sx: number[] = [];
      const sy: number[] = [];
      for (let i = 0; i < state.n; i++) {
        sx.push(px[i], px[i] + scale * state.v[i][0]);
        sy.push(py[i], py[i] + scale * state.v[i][1]);
      }
      series.push({ x: sx, y: sy, mark: "segments", color: "#9db7d2" });
    }
    series.push({ x: px, y: py, mark: "dots", color: PALETTE[0] });
    xLabel = spec.labels?.x ?? "x_0";
    yLabel = spec.labels?.y ?? "x_1";
  } else if (state.v) {
    series.push({
      x: state.x.map((p) => p[0]),
      y: state.v.map((w) => w[0]),
      mark: "dots",
      color: PALETTE[0],
    });
    xLabel = spec.labels?.x ?? "x";
    yLabel = spec.labels?.y ?? "v";
  } else {
    series.push({
      x: state.x.map((p) => p[0]),
      y: state.x.map((_, i) => i),
      mark: "dots",
      color: PALETTE[0],
    });
    xLabel = spec.labels?.x ?? "x";
    yLabel = spec.labels?.y ?? "particle index";
  }

  const body = panel({
    frame: FULL,
    series,
    title: spec.labels?.title ?? `${defaultTitle(spec.sources[0])} at t=${tickLabel(tFinal)}`,
    xLabel,
    yLabel,
  });
  return svgDocument(PANEL_WIDTH, PANEL_HEIGHT, body);
}

/** Produce the SVG text for a figure spec without touching the disk. */
export function renderFigure(spec: FigureSpec): string {
  switch (spec.kind) {
    case "snapshot":
      return renderSnapshot(spec);
    case "timeseries_log":
      return renderTimeseriesLog(spec);
    case "threshold_curve":
      return renderThresholdCurve(spec);
    case "particle_scatter":
      return renderParticleScatter(spec);
  }
}
