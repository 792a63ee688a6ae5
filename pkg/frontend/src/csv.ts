/**
 * Parser for the experiment results CSV emitted by the banditlab CLI.
 *
 * Schema (one row per (algorithm, horizon) cell):
 *   instance_id,algorithm,T,runs,errors,e_hat,log_e_hat,ci_lo,ci_hi,seed
 *
 * Zero-error cells carry the literal token `-inf` in log_e_hat; they parse to
 * -Infinity and are dropped from plotted lines (with a caption note).
 */

export const CSV_HEADER =
  "instance_id,algorithm,T,runs,errors,e_hat,log_e_hat,ci_lo,ci_hi,seed";

export interface ErrorRecord {
  instanceId: string;
  algorithm: string;
  T: number;
  runs: number;
  errors: number;
  eHat: number;
  logEHat: number;
  ciLo: number;
  ciHi: number;
  seed: number;
}

export class CsvFormatError extends Error {}

function parseNumber(token: string, field: string, line: number): number {
  if (token === "-inf") return -Infinity;
  if (token === "inf") return Infinity;
  const value = Number(token);
  if (token === "" || Number.isNaN(value)) {
    throw new CsvFormatError(`line ${line}: field ${field} is not a number: ${token}`);
  }
  return value;
}

export function parseResultsCsv(text: string): ErrorRecord[] {
  const lines = text.split(/\r?\n/).filter((line) => line.length > 0);
  if (lines.length === 0) {
    throw new CsvFormatError("empty CSV document");
  }
  if (lines[0] !== CSV_HEADER) {
    const got = new Set(lines[0].split(","));
    const missing = CSV_HEADER.split(",").filter((c) => !got.has(c));
    throw new CsvFormatError(
      missing.length > 0
        ? `CSV header is missing columns: ${missing.join(", ")}`
        : `unexpected CSV header: ${lines[0]}`,
    );
  }
  const records: ErrorRecord[] = [];
  for (let i = 1; i < lines.length; i++) {
    const parts = lines[i].split(",");
    if (parts.length !== 10) {
      throw new CsvFormatError(`line ${i + 1}: expected 10 fields, got ${parts.length}`);
    }
    records.push({
      instanceId: parts[0],
      algorithm: parts[1],
      T: parseNumber(parts[2], "T", i + 1),
      runs: parseNumber(parts[3], "runs", i + 1),
      errors: parseNumber(parts[4], "errors", i + 1),
      eHat: parseNumber(parts[5], "e_hat", i + 1),
      logEHat: parseNumber(parts[6], "log_e_hat", i + 1),
      ciLo: parseNumber(parts[7], "ci_lo", i + 1),
      ciHi: parseNumber(parts[8], "ci_hi", i + 1),
      seed: parseNumber(parts[9], "seed", i + 1),
    });
  }
  return records;
}

/** Canonical display order and legend labels for the algorithm identifiers. */
export const ALGORITHM_LABELS: ReadonlyMap<string, string> = new Map([
  ["csr", "Constrained-SR"],
  ["if", "Infeasible First"],
  ["sr", "Classical SR"],
]);

export interface Series {
  algorithm: string;
  label: string;
  points: ErrorRecord[];
}

/**
 * Group the rows of one instance into per-algorithm series, sorted by horizon.
 * Throws when the selection is empty or names an algorithm that is absent.
 */
export function selectSeries(
  records: ErrorRecord[],
  instanceId: string,
  algorithms?: string[],
): Series[] {
  const mine = records.filter((r) => r.instanceId === instanceId);
  if (mine.length === 0) {
    throw new CsvFormatError(`no rows for instance ${instanceId}`);
  }
  const present = [...ALGORITHM_LABELS.keys()].filter((a) =>
    mine.some((r) => r.algorithm === a),
  );
  const wanted = algorithms ?? present;
  const series: Series[] = [];
  for (const algorithm of wanted) {
    const points = mine
      .filter((r) => r.algorithm === algorithm)
      .sort((a, b) => a.T - b.T);
    if (points.length === 0) {
      throw new CsvFormatError(
        `no rows for algorithm ${algorithm} on instance ${instanceId}`,
      );
    }
    series.push({
      algorithm,
      label: ALGORITHM_LABELS.get(algorithm) ?? algorithm,
      points,
    });
  }
  return series;
}
