import { mkdtempSync, writeFileSync } from "fs";
import { tmpdir } from "os";
import { join } from "path";
import { fileURLToPath } from "url";

export const FIXTURES = fileURLToPath(new URL("./fixtures", import.meta.url));

export function scratchDir(): string {
  return mkdtempSync(join(tmpdir(), "figures-"));
}

export function writeText(dir: string, name: string, text: string): string {
  const path = join(dir, name);
  writeFileSync(path, text);
  return path;
}
