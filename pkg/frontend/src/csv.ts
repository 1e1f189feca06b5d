/** Strict readers for the two CSV interfaces: the optimizer's feature dump
 *  (name + the 7 features in fixed order) and name,label files. */

export const FEATURE_NAMES = [
  "and_count", "or_count", "not_count", "node_count",
  "depth", "density", "edge_sum",
] as const;

export interface FeatureRow {
  name: string;
  features: number[];
}

function splitLines(text: string): string[][] {
  return text
    .split(/\r?\n/)
    .filter((line) => line.trim().length > 0)
    .map((line) => line.split(",").map((cell) => cell.trim()));
}

export function parseFeatureCsv(text: string): FeatureRow[] {
  const rows = splitLines(text);
  if (rows.length === 0) throw new Error("feature CSV is empty");
  const expected = ["name", ...FEATURE_NAMES];
  const header = rows[0];
  if (header.join(",") !== expected.join(",")) {
    throw new Error(
      `feature CSV header mismatch: got "${header.join(",")}"`);
  }
  return rows.slice(1).map((cells, i) => {
    if (cells.length !== expected.length) {
      throw new Error(`feature row ${i + 2}: expected ${expected.length} cells`);
    }
    const features = cells.slice(1).map(Number);
    if (features.some((v) => !Number.isFinite(v))) {
      throw new Error(`feature row ${i + 2}: non-numeric feature`);
    }
    return { name: cells[0], features };
  });
}

export function parseLabelCsv(text: string): Map<string, number> {
  const rows = splitLines(text);
  if (rows.length === 0) throw new Error("label CSV is empty");
  if (rows[0].join(",") !== "name,label") {
    throw new Error(`label CSV header mismatch: got "${rows[0].join(",")}"`);
  }
  const out = new Map<string, number>();
  rows.slice(1).forEach((cells, i) => {
    if (cells.length !== 2) throw new Error(`label row ${i + 2}: expected 2 cells`);
    const value = Number(cells[1]);
    if (!Number.isFinite(value)) throw new Error(`label row ${i + 2}: bad label`);
    if (out.has(cells[0])) throw new Error(`duplicate label for "${cells[0]}"`);
    out.set(cells[0], value);
  });
  return out;
}

export interface Dataset {
  names: string[];
  X: number[][];
  y: number[];
}

/** Inner-join features with labels on circuit name; every feature row must
 *  have a label (the reverse is allowed and ignored). */
export function joinOnName(rows: FeatureRow[], labels: Map<string, number>): Dataset {
  const missing = rows.filter((r) => !labels.has(r.name)).map((r) => r.name);
  if (missing.length > 0) {
    throw new Error(
      `${missing.length} circuits have no label (first: ${missing[0]})`);
  }
  return {
    names: rows.map((r) => r.name),
    X: rows.map((r) => r.features),
    y: rows.map((r) => labels.get(r.name) as number),
  };
}
