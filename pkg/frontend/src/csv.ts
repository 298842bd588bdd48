/**
 * CSV parsing for hybridcond sweep output.
 *
 * The files are machine-generated with a fixed dialect: comma-separated,
 * no quoting, one header row, float cells in shortest round-trip form with
 * "inf"/"-inf" divergence sentinels and "nan" for not-applicable.
 */

export interface CsvTable {
  header: string[];
  /** column name -> numeric values (NaN where non-numeric or "nan") */
  columns: Map<string, number[]>;
  /** column name -> raw string values */
  raw: Map<string, string[]>;
  rowCount: number;
}

export class EmptyInput extends Error {}
export class MissingColumn extends Error {}

export function parseNumber(cell: string): number {
  const t = cell.trim();
  if (t === "" || t === "nan" || t === "-nan") return NaN;
  if (t === "inf" || t === "+inf" || t === "Infinity") return Infinity;
  if (t === "-inf" || t === "-Infinity") return -Infinity;
  const v = Number(t);
  return Number.isFinite(v) ? v : NaN;
}

export function parseCsv(text: string): CsvTable {
  const lines = text.split(/\r?\n/).filter((line) => line.length > 0);
  if (lines.length === 0) {
    throw new EmptyInput("CSV has no content");
  }
  const header = lines[0].split(",").map((h) => h.trim());
  if (lines.length === 1) {
    throw new EmptyInput("CSV has a header but no data rows");
  }
  const columns = new Map<string, number[]>();
  const raw = new Map<string, string[]>();
  for (const name of header) {
    columns.set(name, []);
    raw.set(name, []);
  }
  for (const line of lines.slice(1)) {
    const cells = line.split(",");
    if (cells.length !== header.length) {
      throw new Error(
        `row width ${cells.length} does not match header width ${header.length}`,
      );
    }
    header.forEach((name, i) => {
      raw.get(name)!.push(cells[i]);
      columns.get(name)!.push(parseNumber(cells[i]));
    });
  }
  return { header, columns, raw, rowCount: lines.length - 1 };
}

export function requireColumn(table: CsvTable, name: string): number[] {
  const col = table.columns.get(name);
  if (col === undefined) {
    throw new MissingColumn(`column "${name}" not in header [${table.header.join(", ")}]`);
  }
  return col;
}

/** Column is a line series if at least one cell parses to a number. */
export function isNumericColumn(table: CsvTable, name: string): boolean {
  const col = table.columns.get(name);
  if (col === undefined) return false;
  return col.some((v) => !Number.isNaN(v));
}
