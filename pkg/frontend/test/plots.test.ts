import { readFileSync } from "fs";
import { join } from "path";
import { expect, test } from "vitest";
import { renderFigure } from "../src/plots.js";
import { render } from "../src/render.js";
import { MissingColumnError } from "../src/csv.js";
import { scratchDir, writeText } from "./helpers.js";

const SNAP = "node_index,eta,v,h\n0,-1,0.1,0.5\n1,0,0,1\n2,1,-0.1,0.5\n";

test("snapshot renders a density and a velocity panel", () => {
  const dir = scratchDir();
  const src = writeText(dir, "snapshot_final.csv", SNAP);
  const svg = renderFigure({ kind: "snapshot", sources: [src], output: "x.svg" });
  expect(svg).toContain(">density</text>");
  expect(svg).toContain(">velocity</text>");
  expect(svg).toContain(">position</text>");
  expect((svg.match(/<path d=/g) ?? []).length).toBe(2);
});

test("snapshot without a density column names it", () => {
  const dir = scratchDir();
  const src = writeText(dir, "snapshot_final.csv", "node_index,eta,v\n0,0,0\n1,1,1\n");
  expect(() =>
    renderFigure({ kind: "snapshot", sources: [src], output: "x.svg" }),
  ).toThrow(MissingColumnError);
  expect(() =>
    renderFigure({ kind: "snapshot", sources: [src], output: "x.svg" }),
  ).toThrow(/"h"/);
});

test("snapshot tolerates nan cells at collapsed nodes", () => {
  const dir = scratchDir();
  const src = writeText(
    dir, "snapshot_final.csv",
    "node_index,eta,v,h\n0,-1,0.1,0.5\n1,0,0,nan\n2,1,-0.1,0.5\n");
  const svg = renderFigure({ kind: "snapshot", sources: [src], output: "x.svg" });
  expect(svg).toContain("<path d=");
});

test("timeseries_log picks the support velocity spread by default", () => {
  const dir = scratchDir();
  const src = writeText(
    dir, "timeseries.csv",
    "t,sup_speed,rv_support\n0,0.4,0.8\n1,0.2,0.4\n2,0.1,0.2\n");
  const svg = renderFigure({ kind: "timeseries_log", sources: [src], output: "x.svg" });
  expect(svg).toContain(">rv_support</text>");
});

test("timeseries_log falls back to Rv for particle diagnostics", () => {
  const dir = scratchDir();
  const src = writeText(dir, "diagnostics.csv", "t,Rx,Rv\n0,10,5\n1,11,2\n2,12,0.5\n");
  const svg = renderFigure({ kind: "timeseries_log", sources: [src], output: "x.svg" });
  expect(svg).toContain(">Rv</text>");
});

test("timeseries_log honours an explicit column list", () => {
  const dir = scratchDir();
  const src = writeText(dir, "diagnostics.csv", "t,Rx,Rv\n0,10,5\n1,11,2\n2,12,0.5\n");
  const svg = renderFigure({
    kind: "timeseries_log",
    sources: [src],
    output: "x.svg",
    columns: ["Rx", "Rv"],
  });
  expect(svg).toContain(">Rx</text>");
  expect(svg).toContain(">Rv</text>");
});

test("timeseries_log names a requested column that is absent", () => {
  const dir = scratchDir();
  const src = writeText(dir, "diagnostics.csv", "t,Rx\n0,10\n1,11\n");
  expect(() =>
    renderFigure({
      kind: "timeseries_log",
      sources: [src],
      output: "x.svg",
      columns: ["momentum"],
    }),
  ).toThrow(/"momentum"/);
});

test("timeseries_log rejects a column with no positive samples", () => {
  const dir = scratchDir();
  const src = writeText(dir, "timeseries.csv", "t,rv_support\n0,0\n1,-1\n");
  expect(() =>
    renderFigure({ kind: "timeseries_log", sources: [src], output: "x.svg" }),
  ).toThrow(/no positive values/);
});

test("threshold_curve plots the damped slope field when smoothing is absent", () => {
  const dir = scratchDir();
  const src = writeText(
    dir, "curves.json",
    JSON.stringify({ x: [-1, 0, 1], rho0: [0, 1, 0], du0: [0.2, -0.4, 0.2] }));
  const svg = renderFigure({ kind: "threshold_curve", sources: [src], output: "x.svg" });
  expect(svg).not.toContain("psi_conv");
  expect(svg).toContain("<path d=");
});

test("threshold_curve combines slope with smoothed density and sigma bands", () => {
  const dir = scratchDir();
  const src = writeText(
    dir, "curves.json",
    JSON.stringify({
      x: [-1, 0, 1],
      rho0: [0, 1, 0],
      du0: [0.2, -0.4, 0.2],
      psi_conv: [0.5, 0.9, 0.5],
      sigma_plus: [-0.1, -0.3, -0.1],
      sigma_minus: [-0.6, -1.4, -0.6],
    }));
  const verdict = writeText(
    dir, "verdict.json",
    JSON.stringify({ region: "Gap", witness_x: 0.0, margin: -0.1, params: {} }));
  const svg = renderFigure({
    kind: "threshold_curve",
    sources: [src, verdict],
    output: "x.svg",
  });
  expect(svg).toContain(">du0 + psi_conv</text>");
  expect(svg).toContain(">sigma_plus</text>");
  expect(svg).toContain(">sigma_minus</text>");
  expect(svg).toContain("[Gap]");
  expect(svg).toContain("stroke-dasharray");
});

test("threshold_curve without du0 names the field", () => {
  const dir = scratchDir();
  const src = writeText(dir, "curves.json", JSON.stringify({ x: [0, 1] }));
  expect(() =>
    renderFigure({ kind: "threshold_curve", sources: [src], output: "x.svg" }),
  ).toThrow(/"du0"/);
});

test("particle_scatter draws planar positions with velocity whiskers", () => {
  const dir = scratchDir();
  const src = writeText(
    dir, "trajectory.csv",
    "t,x0_0,x0_1,x1_0,x1_1,v0_0,v0_1,v1_0,v1_1\n" +
    "0,0,0,1,1,0.1,0,0,0.1\n" +
    "1,0.5,0,1,1.5,0.2,0,0,0.2\n");
  const svg = renderFigure({ kind: "particle_scatter", sources: [src], output: "x.svg" });
  expect((svg.match(/<circle/g) ?? []).length).toBe(2);
  expect(svg).toContain(">x_0</text>");
  expect(svg).toContain("t=1");
  expect(svg).toContain('stroke="#9db7d2"');
});

test("particle_scatter on one axis is a position-velocity portrait", () => {
  const dir = scratchDir();
  const src = writeText(
    dir, "trajectory.csv",
    "t,x0_0,x1_0,v0_0,v1_0\n0,-1,1,0.3,-0.3\n1,-0.6,0.6,0.2,-0.2\n");
  const svg = renderFigure({ kind: "particle_scatter", sources: [src], output: "x.svg" });
  expect((svg.match(/<circle/g) ?? []).length).toBe(2);
  expect(svg).toContain(">v</text>");
});

test("particle_scatter without velocities falls back to particle index", () => {
  const dir = scratchDir();
  const src = writeText(
    dir, "trajectory.csv",
    "t,x0_0,x1_0,x2_0\n0,-1,0,1\n1,-0.4,0,0.4\n");
  const svg = renderFigure({ kind: "particle_scatter", sources: [src], output: "x.svg" });
  expect((svg.match(/<circle/g) ?? []).length).toBe(3);
  expect(svg).toContain(">particle index</text>");
});

test("particle_scatter needs position columns", () => {
  const dir = scratchDir();
  const src = writeText(dir, "trajectory.csv", "t,a,b\n0,1,2\n");
  expect(() =>
    renderFigure({ kind: "particle_scatter", sources: [src], output: "x.svg" }),
  ).toThrow(/"x0_0"/);
});

test("labels override the defaults", () => {
  const dir = scratchDir();
  const src = writeText(dir, "snapshot_final.csv", SNAP);
  const svg = renderFigure({
    kind: "snapshot",
    sources: [src],
    output: "x.svg",
    labels: { title: "my title", x: "arc length" },
  });
  expect(svg).toContain(">my title</text>");
  expect(svg).toContain(">arc length</text>");
});

test("render writes the file and returns its path", () => {
  const dir = scratchDir();
  const src = writeText(dir, "snapshot_final.csv", SNAP);
  const output = join(dir, "figs", "snap.svg");
  const got = render({ kind: "snapshot", sources: [src], output });
  expect(got).toBe(output);
  const text = readFileSync(output, "utf8");
  expect(text.startsWith("<?xml")).toBe(true);
  expect(text.endsWith("</svg>\n")).toBe(true);
});

test("render refuses to overwrite a source", () => {
  const dir = scratchDir();
  const src = writeText(dir, "snapshot_final.csv", SNAP);
  expect(() =>
    render({ kind: "snapshot", sources: [src], output: src }),
  ).toThrow(/overwrite a source/);
});

test("render reports a missing source file", () => {
  const dir = scratchDir();
  expect(() =>
    render({
      kind: "snapshot",
      sources: [join(dir, "absent.csv")],
      output: join(dir, "x.svg"),
    }),
  ).toThrow(/not found/);
});
