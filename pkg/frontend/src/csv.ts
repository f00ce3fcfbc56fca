import { existsSync, readFileSync } from "node:fs";
import Papa from "papaparse";

export interface CsvTable {
  path: string;
  columns: Record<string, number[]>;
  rows: number;
}

/** Load a numeric CSV with a header row; errors name the offending file. */
export function loadCsv(path: string): CsvTable {
  if (!existsSync(path)) {
    throw new Error(`missing CSV file: ${path}`);
  }
  const text = readFileSync(path, "utf8");
  const parsed = Papa.parse<Record<string, string>>(text.trim(), {
    header: true,
    skipEmptyLines: true,
  });
  if (parsed.errors.length > 0) {
    throw new Error(`cannot parse ${path}: ${parsed.errors[0].message}`);
  }
  const fields = parsed.meta.fields ?? [];
  const columns: Record<string, number[]> = {};
  for (const name of fields) {
    columns[name] = parsed.data.map((row) => Number(row[name]));
  }
  return { path, columns, rows: parsed.data.length };
}

/** Columns looked up by name, with a load error if any is absent. */
export function requireColumns(table: CsvTable, names: string[]): number[][] {
  return names.map((name) => {
    const col = table.columns[name];
    if (col === undefined) {
      throw new Error(`column '${name}' not found in ${table.path}`);
    }
    return col;
  });
}
