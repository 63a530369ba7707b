import { expect, test } from "vitest";
import { escapeXml, panel, px, svgDocument, tickLabel, PALETTE } from "../src/svg.js";

test("tick labels are compact in plain and exponent ranges", () => {
  expect(tickLabel(0)).toBe("0");
  expect(tickLabel(0.5)).toBe("0.5");
  expect(tickLabel(20)).toBe("20");
  expect(tickLabel(-1.25)).toBe("-1.25");
  expect(tickLabel(1e-7)).toBe("1e-7");
  expect(tickLabel(2.5e-7)).toBe("2.5e-7");
  expect(tickLabel(123456)).toBe("1.23e5");
});

test("px rounds to hundredths", () => {
  expect(px(3.14159)).toBe(3.14);
  expect(px(-0.001)).toBe(-0);
  expect(`${px(-0.001)}`).toBe("0");
});

test("escapeXml handles markup characters", () => {
  expect(escapeXml('a<b & "c"')).toBe("a&lt;b &amp; &quot;c&quot;");
});

test("panel draws series inside a bordered frame", () => {
  const body = panel({
    frame: { left: 0, top: 0, width: 640, height: 420 },
    series: [
      { label: "one", x: [0, 1, 2], y: [0, 1, 0], mark: "line", color: PALETTE[0] },
      { label: "two", x: [0, 1, 2], y: [1, 0, 1], mark: "dots", color: PALETTE[1] },
    ],
    title: "demo",
    xLabel: "x",
    yLabel: "y",
  });
  expect(body).toContain("<path d=");
  expect(body).toContain("<circle");
  expect(body).toContain(">demo</text>");
  expect(body).toContain(">one</text>");
  expect(body).toContain(">two</text>");
  const doc = svgDocument(640, 420, body);
  expect(doc.startsWith("<?xml")).toBe(true);
  expect(doc).toContain('viewBox="0 0 640 420"');
});

test("log panels drop non-positive samples", () => {
  const body = panel({
    frame: { left: 0, top: 0, width: 640, height: 420 },
    series: [{ x: [0, 1, 2, 3], y: [0, 1e-6, -1, 1e-2], mark: "line", color: "#000" }],
    yLog: true,
  });
  expect(body).toContain("1e-6");
});

test("panel refuses series with nothing drawable", () => {
  expect(() =>
    panel({
      frame: { left: 0, top: 0, width: 640, height: 420 },
      series: [{ x: [0, 1], y: [NaN, NaN], mark: "line", color: "#000" }],
    })).toThrow(/nothing to draw/);
});

test("identical panel inputs give identical markup", () => {
  const opts = () => ({
    frame: { left: 0, top: 0, width: 640, height: 420 },
    series: [{ x: [0, 0.1, 0.7], y: [1.31, -2.7, 0.02], mark: "line" as const, color: "#123456" }],
    title: "same",
  });
  expect(panel(opts())).toBe(panel(opts()));
});
