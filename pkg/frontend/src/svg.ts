import { scaleLinear, scaleLog } from "d3-scale";
import type { ScaleContinuousNumeric } from "d3-scale";
import { line as d3line } from "d3-shape";

export const PANEL_WIDTH = 640;
export const PANEL_HEIGHT = 420;
export const MARGIN = { top: 36, right: 18, bottom: 48, left: 72 };

/** Muted categorical palette, assigned to series in order. */
export const PALETTE = ["#1f6fb4", "#c23b3b", "#2e8b57", "#d88a2d", "#7a5ab8", "#76624c"];

export interface Series {
  label?: string;
  x: number[];
  y: number[];
  mark: "line" | "dots" | "segments";
  color: string;
  dash?: string;
}

export interface Frame {
  left: number;
  top: number;
  width: number;
  height: number;
}

export interface PanelOptions {
  frame: Frame;
  series: Series[];
  title?: string;
  xLabel?: string;
  yLabel?: string;
  yLog?: boolean;
  zeroLine?: boolean;
}

export function escapeXml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

/** Round to 0.01 px so path data stays short and byte-stable. */
export function px(v: number): number {
  return Math.round(v * 100) / 100;
}

function trimZeros(s: string): string {
  return s.includes(".") ? s.replace(/\.?0+$/, "") : s;
}

/** Compact tick label: plain decimal mid-range, exponent outside it. */
export function tickLabel(v: number): string {
  if (!Number.isFinite(v)) return "";
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 1e4 || a < 1e-3) {
    const [mantissa, exponent] = v.toExponential(2).split("e");
    return `${trimZeros(mantissa)}e${exponent.replace("+", "")}`;
  }
  return trimZeros(v.toPrecision(6));
}

export function svgDocument(width: number, height: number, body: string): string {
  return (
    `<?xml version="1.0" encoding="UTF-8"?>\n` +
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}"` +
    ` viewBox="0 0 ${width} ${height}" font-family="Helvetica,Arial,sans-serif">\n` +
    `<rect width="${width}" height="${height}" fill="#ffffff"/>\n` +
    body +
    `</svg>\n`
  );
}

type NumScale = ScaleContinuousNumeric<number, number>;

function finitePoints(s: Series, yLog: boolean): Array<[number, number]> {
  const pts: Array<[number, number]> = [];
  for (let i = 0; i < s.x.length; i++) {
    const x = s.x[i];
    const y = s.y[i];
    if (!Number.isFinite(x) || !Number.isFinite(y)) continue;
    if (yLog && y <= 0) continue;
    pts.push([x, y]);
  }
  return pts;
}

function domainOf(values: number[], log: boolean): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of values) {
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  if (lo === hi) {
    if (log) return [lo / 10, hi * 10];
    return [lo - 1, hi + 1];
  }
  return [lo, hi];
}

function logTicks(scale: NumScale): number[] {
  let ticks = scale.ticks();
  if (ticks.length > 9) {
    ticks = ticks.filter((v) => {
      const l = Math.log10(v);
      return Math.abs(l - Math.round(l)) < 1e-9;
    });
  }
  return ticks;
}

/**
 * One cartesian panel: border, gridlines, ticks, the series marks, axis
 * labels, and a legend when more than one series is named.
 */
export function panel(opts: PanelOptions): string {
  const { frame, series } = opts;
  const yLog = opts.yLog ?? false;
  const x0 = frame.left + MARGIN.left;
  const x1 = frame.left + frame.width - MARGIN.right;
  const yTop = frame.top + MARGIN.top;
  const yBot = frame.top + frame.height - MARGIN.bottom;

  const drawable = series.map((s) => finitePoints(s, yLog));
  if (drawable.every((pts) => pts.length === 0)) {
    throw new Error("nothing to draw: all series are empty after dropping non-finite values");
  }

  const allX: number[] = [];
  const allY: number[] = [];
  for (const pts of drawable) {
    for (const [x, y] of pts) {
      allX.push(x);
      allY.push(y);
    }
  }
  const xScale = scaleLinear().domain(domainOf(allX, false)).range([x0, x1]).nice();
  const yScale: NumScale = yLog
    ? scaleLog().domain(domainOf(allY, true)).range([yBot, yTop]).nice()
    : scaleLinear().domain(domainOf(allY, false)).range([yBot, yTop]).nice();

  const parts: string[] = [];
  const xTicks = xScale.ticks(6);
  const yTicks = yLog ? logTicks(yScale) : yScale.ticks(6);

  for (const t of xTicks) {
    const gx = px(xScale(t));
    parts.push(`<line x1="${gx}" y1="${yTop}" x2="${gx}" y2="${yBot}" stroke="#e3e3e3"/>`);
    parts.push(
      `<text x="${gx}" y="${yBot + 18}" font-size="11" fill="#333" text-anchor="middle">` +
      `${escapeXml(tickLabel(t))}</text>`);
  }
  for (const t of yTicks) {
    const gy = px(yScale(t));
    parts.push(`<line x1="${x0}" y1="${gy}" x2="${x1}" y2="${gy}" stroke="#e3e3e3"/>`);
    parts.push(
      `<text x="${x0 - 6}" y="${gy + 4}" font-size="11" fill="#333" text-anchor="end">` +
      `${escapeXml(tickLabel(t))}</text>`);
  }

  if (opts.zeroLine && !yLog) {
    const [dLo, dHi] = yScale.domain();
    if (dLo < 0 && dHi > 0) {
      const gy = px(yScale(0));
      parts.push(
        `<line x1="${x0}" y1="${gy}" x2="${x1}" y2="${gy}" stroke="#888" stroke-dasharray="4,3"/>`);
    }
  }

  const toPath = d3line<[number, number]>()
    .x((p) => px(xScale(p[0])))
    .y((p) => px(yScale(p[1])));
  for (let i = 0; i < series.length; i++) {
    const s = series[i];
    const pts = drawable[i];
    if (pts.length === 0) continue;
    const dash = s.dash ? ` stroke-dasharray="${s.dash}"` : "";
    if (s.mark === "line") {
      parts.push(
        `<path d="${toPath(pts)}" fill="none" stroke="${s.color}" stroke-width="1.6"${dash}/>`);
    } else if (s.mark === "dots") {
      for (const [x, y] of pts) {
        parts.push(
          `<circle cx="${px(xScale(x))}" cy="${px(yScale(y))}" r="2.5" fill="${s.color}"/>`);
      }
    } else {
      for (let j = 0; j + 1 < pts.length; j += 2) {
        const [xa, ya] = pts[j];
        const [xb, yb] = pts[j + 1];
        parts.push(
          `<line x1="${px(xScale(xa))}" y1="${px(yScale(ya))}" x2="${px(xScale(xb))}"` +
          ` y2="${px(yScale(yb))}" stroke="${s.color}" stroke-width="1.1"${dash}/>`);
      }
    }
  }

  parts.push(
    `<rect x="${x0}" y="${yTop}" width="${px(x1 - x0)}" height="${px(yBot - yTop)}"` +
    ` fill="none" stroke="#444"/>`);

  if (opts.title) {
    const cx = px(frame.left + frame.width / 2);
    parts.push(
      `<text x="${cx}" y="${frame.top + 20}" font-size="14" fill="#111" text-anchor="middle">` +
      `${escapeXml(opts.title)}</text>`);
  }
  if (opts.xLabel) {
    const cx = px((x0 + x1) / 2);
    parts.push(
      `<text x="${cx}" y="${yBot + 36}" font-size="12" fill="#111" text-anchor="middle">` +
      `${escapeXml(opts.xLabel)}</text>`);
  }
  if (opts.yLabel) {
    const cy = px((yTop + yBot) / 2);
    parts.push(
      `<text x="${frame.left + 16}" y="${cy}" font-size="12" fill="#111" text-anchor="middle"` +
      ` transform="rotate(-90 ${frame.left + 16} ${cy})">${escapeXml(opts.yLabel)}</text>`);
  }

  const named = series.filter((s) => s.label);
  if (named.length > 1) {
    let ly = yTop + 14;
    for (const s of named) {
      const sw = s.dash ? ` stroke-dasharray="${s.dash}"` : "";
      parts.push(
        `<line x1="${x1 - 120}" y1="${ly - 4}" x2="${x1 - 96}" y2="${ly - 4}"` +
        ` stroke="${s.color}" stroke-width="1.6"${sw}/>`);
      parts.push(
        `<text x="${x1 - 90}" y="${ly}" font-size="11" fill="#333">${escapeXml(s.label!)}</text>`);
      ly += 16;
    }
  }

  return parts.join("\n") + "\n";
}
