import { readFileSync } from "node:fs";

export interface Table {
  header: string[];
  rows: string[][];
}

export class CsvError extends Error {
  constructor(public file: string, message: string) {
    super(`${file}: ${message}`);
  }
}

/** Read one of the solver's CSV artifacts (plain comma-separated, no quoting). */
export function readCsv(path: string): Table {
  let text: string;
  try {
    text = readFileSync(path, "utf8");
  } catch {
    throw new CsvError(path, "file not found or unreadable");
  }
  const lines = text.split("\n").filter((l) => l.length > 0);
  if (lines.length < 1) {
    throw new CsvError(path, "empty file");
  }
  const header = lines[0].split(",");
  const rows = lines.slice(1).map((l) => l.split(","));
  for (const row of rows) {
    if (row.length !== header.length) {
      throw new CsvError(path, `row has ${row.length} cells, header has ${header.length}`);
    }
  }
  return { header, rows };
}

/** Numeric column by name; throws naming the file and column on failure. */
export function column(table: Table, file: string, name: string): number[] {
  const idx = table.header.indexOf(name);
  if (idx < 0) {
    throw new CsvError(file, `missing column "${name}" (have: ${table.header.join(", ")})`);
  }
  return table.rows.map((row, i) => {
    const v = Number(row[idx]);
    if (Number.isNaN(v)) {
      throw new CsvError(file, `non-numeric value "${row[idx]}" in column "${name}" row ${i}`);
    }
    return v;
  });
}

export function textColumn(table: Table, file: string, name: string): string[] {
  const idx = table.header.indexOf(name);
  if (idx < 0) {
    throw new CsvError(file, `missing column "${name}"`);
  }
  return table.rows.map((row) => row[idx]);
}
