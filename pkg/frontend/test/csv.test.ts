import { describe, expect, it } from "vitest";
import { CSV_HEADER, CsvFormatError, parseResultsCsv, selectSeries } from "../src/csv";

const SAMPLE = [
  CSV_HEADER,
  "demo,csr,1000,400,67,0.1675,-1.7867719277170158,0.134,0.207,42",
  "demo,csr,2000,400,0,0.0,-inf,0.0,0.0095,43",
  "demo,if,1000,400,113,0.2825,-1.2640767283956416,0.24,0.328,44",
].join("\n");

describe("parseResultsCsv", () => {
  it("parses rows with native numbers", () => {
    const records = parseResultsCsv(SAMPLE);
    expect(records).toHaveLength(3);
    expect(records[0]).toMatchObject({
      instanceId: "demo",
      algorithm: "csr",
      T: 1000,
      runs: 400,
      errors: 67,
      eHat: 0.1675,
      seed: 42,
    });
  });

  it("maps the -inf token to -Infinity", () => {
    const records = parseResultsCsv(SAMPLE);
    expect(records[1].logEHat).toBe(-Infinity);
    expect(Number.isFinite(records[0].logEHat)).toBe(true);
  });

  it("reports missing columns", () => {
    const bad = "instance_id,algorithm,T\nz,csr,1";
    expect(() => parseResultsCsv(bad)).toThrowError(/missing columns.*e_hat/);
  });

  it("rejects rows with the wrong arity", () => {
    expect(() => parseResultsCsv(CSV_HEADER + "\na,b,c")).toThrowError(/expected 10 fields/);
  });

  it("rejects non-numeric fields", () => {
    const bad = CSV_HEADER + "\ndemo,csr,xxx,400,67,0.1,−1.0,0.1,0.2,42";
    expect(() => parseResultsCsv(bad)).toThrowError(CsvFormatError);
  });
});

describe("selectSeries", () => {
  it("groups by algorithm sorted by horizon", () => {
    const series = selectSeries(parseResultsCsv(SAMPLE), "demo");
    expect(series.map((s) => s.algorithm)).toEqual(["csr", "if"]);
    expect(series[0].label).toBe("Constrained-SR");
    expect(series[0].points.map((p) => p.T)).toEqual([1000, 2000]);
  });

  it("errors on an unknown instance", () => {
    expect(() => selectSeries(parseResultsCsv(SAMPLE), "nope")).toThrowError(/no rows/);
  });

  it("errors when a requested algorithm is absent", () => {
    expect(() => selectSeries(parseResultsCsv(SAMPLE), "demo", ["sr"])).toThrowError(
      /no rows for algorithm sr/,
    );
  });
});
