import { readFileSync } from "fs";
import { dirname, isAbsolute, resolve } from "path";
import { z } from "zod";

export const FIGURE_KINDS = [
  "snapshot",
  "timeseries_log",
  "threshold_curve",
  "particle_scatter",
] as const;

export type FigureKind = (typeof FIGURE_KINDS)[number];

const figureSpecSchema = z
  .object({
    kind: z.enum(FIGURE_KINDS),
    sources: z.array(z.string()).min(1),
    output: z.string().min(1),
    labels: z
      .object({
        title: z.string().optional(),
        x: z.string().optional(),
        y: z.string().optional(),
      })
      .strict()
      .optional(),
    columns: z.array(z.string()).min(1).optional(),
  })
  .strict();

export type FigureSpec = z.infer<typeof figureSpecSchema>;

export function parseFigureSpec(obj: unknown): FigureSpec {
  const result = figureSpecSchema.safeParse(obj);
  if (!result.success) {
    const first = result.error.issues[0];
    const where = first.path.length > 0 ? ` at ${first.path.join(".")}` : "";
    throw new Error(`invalid figure spec${where}: ${first.message}`);
  }
  return result.data;
}

/**
 * Load a spec from a JSON file. Relative source and output paths are
 * taken relative to the spec file's own directory.
 */
export function loadFigureSpec(path: string): FigureSpec {
  let body: unknown;
  try {
    body = JSON.parse(readFileSync(path, "utf8"));
  } catch (err) {
    throw new Error(`cannot parse ${path}: ${(err as Error).message}`);
  }
  const spec = parseFigureSpec(body);
  const base = dirname(resolve(path));
  const anchor = (p: string) => (isAbsolute(p) ? p : resolve(base, p));
  return {
    ...spec,
    sources: spec.sources.map(anchor),
    output: anchor(spec.output),
  };
}
