import { readFileSync } from "fs";
import { MissingColumnError } from "./csv.js";

/** A parsed JSON artifact (curves, verdict, summary, ...). */
export interface JsonDoc {
  file: string;
  body: Record<string, unknown>;
}

export function readJson(path: string): JsonDoc {
  const text = readFileSync(path, "utf8");
  let body: unknown;
  try {
    body = JSON.parse(text);
  } catch (err) {
    throw new Error(`cannot parse ${path}: ${(err as Error).message}`);
  }
  if (typeof body !== "object" || body === null || Array.isArray(body)) {
    throw new Error(`cannot parse ${path}: top level must be an object`);
  }
  return { file: path, body: body as Record<string, unknown> };
}

/**
 * Numeric array field of a JSON artifact. The writer encodes non-finite
 * floats as null; those come back as NaN so plots can drop them.
 */
export function numberArray(doc: JsonDoc, key: string): number[] {
  const raw = doc.body[key];
  if (raw === undefined) {
    throw new MissingColumnError(key, doc.file);
  }
  if (!Array.isArray(raw)) {
    throw new Error(`field "${key}" in ${doc.file} is not an array`);
  }
  return raw.map((v) => (typeof v === "number" ? v : NaN));
}

export function hasField(doc: JsonDoc, key: string): boolean {
  return doc.body[key] !== undefined;
}

export function stringField(doc: JsonDoc, key: string): string | undefined {
  const raw = doc.body[key];
  return typeof raw === "string" ? raw : undefined;
}
