import { readFileSync } from "fs";
import { join } from "path";
import { describe, expect, it } from "vitest";
import { parseResultsCsv, selectSeries } from "../src/csv";
import { buildFigureSvg } from "../src/svg";

const GOLDEN_DIR = join(__dirname, "..", "golden");
const csvText = readFileSync(join(GOLDEN_DIR, "instance-a.csv"), "utf-8");
const goldenSvg = readFileSync(join(GOLDEN_DIR, "instance-a.svg"), "utf-8");

describe("golden instance-a figure", () => {
  const records = parseResultsCsv(csvText);
  const series = selectSeries(records, "instance-a");
  const svg = buildFigureSvg("instance-a", series);

  it("reproduces the checked-in SVG byte for byte", () => {
    expect(svg).toBe(goldenSvg);
  });

  it("plots exactly the finite CSV values", () => {
    const markers = [
      ...svg.matchAll(
        /<circle[^>]*data-algorithm="(\w+)" data-t="([^"]+)" data-log="([^"]+)"/g,
      ),
    ].map((m) => ({ algorithm: m[1], T: Number(m[2]), logEHat: Number(m[3]) }));
    const finiteRows = records.filter((r) => Number.isFinite(r.logEHat));
    expect(markers).toHaveLength(finiteRows.length);
    for (const row of finiteRows) {
      const match = markers.find((m) => m.algorithm === row.algorithm && m.T === row.T);
      expect(match, `marker for ${row.algorithm} T=${row.T}`).toBeDefined();
      // String(value) round-trips doubles exactly, so this is equality, not approx
      expect(match!.logEHat).toBe(row.logEHat);
    }
  });

  it("omits the zero-error cell and says so", () => {
    const infRows = records.filter((r) => !Number.isFinite(r.logEHat));
    expect(infRows).toHaveLength(1);
    expect(infRows[0]).toMatchObject({ algorithm: "csr", T: 10000 });
    const csrMarkers = [...svg.matchAll(/data-algorithm="csr" data-t="(\d+)"/g)].map((m) =>
      Number(m[1]),
    );
    expect(csrMarkers).not.toContain(10000);
    expect(svg).toContain("Constrained-SR: 1 zero-error cell(s) omitted");
  });
});
