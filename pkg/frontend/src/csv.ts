import { readFileSync } from "fs";
import { basename } from "path";
import Papa from "papaparse";

/** A parsed CSV artifact: one named header row plus numeric data rows. */
export interface Table {
  file: string;
  header: string[];
  rows: number[][];
}

/** Raised when a renderer needs a column the artifact does not carry. */
export class MissingColumnError extends Error {
  column: string;
  file: string;

  constructor(column: string, file: string) {
    super(`missing column "${column}" in ${basename(file)}`);
    this.name = "MissingColumnError";
    this.column = column;
    this.file = file;
  }
}

export function readCsv(path: string): Table {
  const text = readFileSync(path, "utf8");
  const parsed = Papa.parse<number[]>(text.trim(), {
    delimiter: ",",
    dynamicTyping: true,
    skipEmptyLines: true,
  });
  if (parsed.errors.length > 0) {
    const first = parsed.errors[0];
    throw new Error(`cannot parse ${path}: ${first.message}`);
  }
  const data = parsed.data;
  if (data.length < 1) {
    throw new Error(`cannot parse ${path}: no header row`);
  }
  const header = (data[0] as unknown as (string | number)[]).map(String);
  const rows = data.slice(1).map((row) => row.map(Number));
  for (const row of rows) {
    if (row.length !== header.length) {
      throw new Error(
        `cannot parse ${path}: row has ${row.length} fields, header has ${header.length}`);
    }
  }
  return { file: path, header, rows };
}

/** Extract one column by name; the error names the column it wanted. */
export function column(table: Table, name: string): number[] {
  const idx = table.header.indexOf(name);
  if (idx < 0) {
    throw new MissingColumnError(name, table.file);
  }
  return table.rows.map((row) => row[idx]);
}

export function hasColumn(table: Table, name: string): boolean {
  return table.header.includes(name);
}
