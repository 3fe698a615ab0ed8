/**
 * CSV schemas written by the simulation harness.
 *
 * ROC:   strategy,csi_mode,L,M,eps,zeta,pfa,pmd,trials
 * RRMSE: strategy,L,target,rrmse_pct,trials
 */

import Papa from "papaparse";

export class SchemaError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "SchemaError";
  }
}

export interface RocRow {
  strategy: string;
  csi_mode: string;
  L: number;
  M: number;
  eps: number;
  zeta: number;
  pfa: number;
  pmd: number;
  trials: number;
}

export interface RrmseRow {
  strategy: string;
  L: number;
  target: string;
  rrmse_pct: number;
  trials: number;
}

export const ROC_COLUMNS: (keyof RocRow)[] = [
  "strategy", "csi_mode", "L", "M", "eps", "zeta", "pfa", "pmd", "trials",
];
export const RRMSE_COLUMNS: (keyof RrmseRow)[] = [
  "strategy", "L", "target", "rrmse_pct", "trials",
];

const ROC_NUMERIC: (keyof RocRow)[] = ["L", "M", "eps", "zeta", "pfa", "pmd", "trials"];
const RRMSE_NUMERIC: (keyof RrmseRow)[] = ["L", "rrmse_pct", "trials"];

function parseTable(
  text: string,
  columns: string[],
  numeric: string[],
): Record<string, string | number>[] {
  const parsed = Papa.parse<Record<string, string>>(text.trim(), {
    header: true,
    skipEmptyLines: true,
  });
  const fields = parsed.meta.fields ?? [];
  for (const col of columns) {
    if (!fields.includes(col)) {
      throw new SchemaError(`missing column: ${col}`);
    }
  }
  if (parsed.data.length === 0) {
    throw new SchemaError("no data rows");
  }
  return parsed.data.map((raw, i) => {
    const row: Record<string, string | number> = {};
    for (const col of columns) {
      const cell = raw[col];
      if (cell === undefined || cell === "") {
        throw new SchemaError(`row ${i + 1}: missing value for column ${col}`);
      }
      if (numeric.includes(col)) {
        const v = Number(cell);
        if (!Number.isFinite(v)) {
          throw new SchemaError(`row ${i + 1}: column ${col} is not numeric: ${cell}`);
        }
        row[col] = v;
      } else {
        row[col] = cell;
      }
    }
    return row;
  });
}

export function parseRocCsv(text: string): RocRow[] {
  return parseTable(text, ROC_COLUMNS, ROC_NUMERIC) as unknown as RocRow[];
}

export function parseRrmseCsv(text: string): RrmseRow[] {
  return parseTable(text, RRMSE_COLUMNS, RRMSE_NUMERIC) as unknown as RrmseRow[];
}

/** Group rows by the given keys, preserving first-appearance order. */
export function groupBy<T extends Record<string, unknown>>(
  rows: T[],
  keys: string[],
): Map<string, T[]> {
  for (const key of keys) {
    if (rows.length > 0 && !(key in rows[0])) {
      throw new SchemaError(`unknown grouping key: ${key}`);
    }
  }
  const out = new Map<string, T[]>();
  for (const row of rows) {
    const label = keys.map((k) => `${k}=${row[k]}`).join(" ");
    const bucket = out.get(label);
    if (bucket) {
      bucket.push(row);
    } else {
      out.set(label, [row]);
    }
  }
  return out;
}
