import { existsSync, mkdirSync, writeFileSync } from "fs";
import { dirname, resolve } from "path";
import { FigureSpec } from "./figspec.js";
import { renderFigure } from "./plots.js";

/**
 * Render one figure to spec.output and return that path. Output is SVG;
 * the bytes are a pure function of the source artifacts, so rendering
 * the same inputs twice gives identical files.
 */
export function render(spec: FigureSpec): string {
  const out = resolve(spec.output);
  for (const src of spec.sources) {
    if (resolve(src) === out) {
      throw new Error(`output ${spec.output} would overwrite a source file`);
    }
    if (!existsSync(src)) {
      throw new Error(`source file not found: ${src}`);
    }
  }
  const svg = renderFigure(spec);
  mkdirSync(dirname(out), { recursive: true });
  writeFileSync(out, svg);
  return out;
}
