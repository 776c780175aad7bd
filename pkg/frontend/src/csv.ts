import * as fs from "node:fs";

/** A CSV file produced by the simulation CLI: '#' metadata, one header line, rows. */
export interface Table {
  path: string;
  meta: Record<string, string>;
  columns: string[];
  /** Numeric cells; empty cells (e.g. nu on a no_fringe row) become null. */
  rows: (number | null)[][];
  /** Raw string cells for non-numeric columns such as `status`. */
  raw: string[][];
}

export class SchemaError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "SchemaError";
  }
}

const KNOWN_SCHEMAS: Record<string, string[]> = {
  wigner: ["x", "p", "w"],
  visibility: ["tau", "nu", "fringe_spacing", "status"],
  pdensity: ["tau", "x", "p_of_x"],
  moments: ["tau", "re_mean_a", "im_mean_a", "mean_n", "stderr_n"],
  negativity: ["tau", "negativity_volume"],
};

export function readTable(path: string): Table {
  let text: string;
  try {
    text = fs.readFileSync(path, "utf-8");
  } catch (err) {
    throw new SchemaError(`cannot read ${path}: ${(err as Error).message}`);
  }
  const meta: Record<string, string> = {};
  let header: string[] | null = null;
  const rows: (number | null)[][] = [];
  const raw: string[][] = [];
  for (const line of text.split("\n")) {
    const s = line.trim();
    if (s.length === 0) continue;
    if (s.startsWith("#")) {
      const body = s.slice(1).trim();
      const colon = body.indexOf(":");
      if (colon > 0) meta[body.slice(0, colon).trim()] = body.slice(colon + 1).trim();
      continue;
    }
    const cells = s.split(",");
    if (header === null) {
      header = cells.map((c) => c.trim());
      continue;
    }
    if (cells.length !== header.length) {
      throw new SchemaError(
        `${path}: row has ${cells.length} cells, header has ${header.length}`
      );
    }
    raw.push(cells);
    rows.push(
      cells.map((c) => {
        const t = c.trim();
        if (t === "") return null;
        const v = Number(t);
        return Number.isNaN(v) ? null : v;
      })
    );
  }
  if (header === null) {
    throw new SchemaError(`${path}: empty CSV (no header line)`);
  }
  if (rows.length === 0) {
    throw new SchemaError(`${path}: no data rows`);
  }
  return { path, meta, columns: header, rows, raw };
}

/** Identify which CLI schema a table carries, or throw. */
export function schemaOf(table: Table): string {
  for (const [name, cols] of Object.entries(KNOWN_SCHEMAS)) {
    if (cols.length === table.columns.length && cols.every((c, i) => c === table.columns[i])) {
      return name;
    }
  }
  throw new SchemaError(
    `${table.path}: unrecognized column set [${table.columns.join(", ")}]`
  );
}

export function expectSchema(table: Table, wanted: string): void {
  const got = schemaOf(table);
  if (got !== wanted) {
    throw new SchemaError(`${table.path}: expected ${wanted} columns, found ${got}`);
  }
}

export function column(table: Table, name: string): (number | null)[] {
  const idx = table.columns.indexOf(name);
  if (idx < 0) throw new SchemaError(`${table.path}: no column ${name}`);
  return table.rows.map((r) => r[idx]);
}
