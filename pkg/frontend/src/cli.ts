#!/usr/bin/env node
/**
 * plot — render a results CSV into a Figure-5-style SVG (or PNG).
 *
 * Usage:
 *   plot --csv results.csv [--csv more.csv] --instance instance-a --out fig.svg
 *        [--algorithms csr,if] [--title text] [--ci] [--png]
 *
 * The CSV must follow the banditlab schema. Selection errors (unknown
 * instance, missing algorithm, malformed CSV) exit nonzero without writing.
 */

import { readFileSync, writeFileSync } from "fs";
import { CsvFormatError, parseResultsCsv, selectSeries } from "./csv";
import { buildFigureSvg, PlotDataError } from "./svg";

interface CliArgs {
  csv: string[];
  instance?: string;
  out?: string;
  algorithms?: string[];
  title?: string;
  ci: boolean;
  png: boolean;
}

class UsageError extends Error {}

function parseArgs(argv: string[]): CliArgs {
  const args: CliArgs = { csv: [], ci: false, png: false };
  for (let i = 0; i < argv.length; i++) {
    const flag = argv[i];
    const next = () => {
      if (i + 1 >= argv.length) throw new UsageError(`${flag} needs a value`);
      return argv[++i];
    };
    switch (flag) {
      case "--csv":
        args.csv.push(next());
        break;
      case "--instance":
        args.instance = next();
        break;
      case "--out":
        args.out = next();
        break;
      case "--algorithms":
        args.algorithms = next().split(",").map((a) => a.trim()).filter(Boolean);
        break;
      case "--title":
        args.title = next();
        break;
      case "--ci":
        args.ci = true;
        break;
      case "--png":
        args.png = true;
        break;
      default:
        throw new UsageError(`unknown flag ${flag}`);
    }
  }
  if (args.csv.length === 0) throw new UsageError("--csv is required");
  if (!args.instance) throw new UsageError("--instance is required");
  if (!args.out) throw new UsageError("--out is required");
  return args;
}

export function main(argv: string[]): number {
  let args: CliArgs;
  try {
    args = parseArgs(argv);
  } catch (err) {
    process.stderr.write(`error: ${(err as Error).message}\n`);
    return 2;
  }
  try {
    const records = args.csv.flatMap((path) => parseResultsCsv(readFileSync(path, "utf-8")));
    const series = selectSeries(records, args.instance!, args.algorithms);
    const svg = buildFigureSvg(args.instance!, series, { title: args.title, ci: args.ci });
    if (args.png) {
      // optional rasterization; the SVG string stays the source of truth
      // eslint-disable-next-line @typescript-eslint/no-var-requires
      const { Resvg } = require("@resvg/resvg-js");
      const png = new Resvg(svg).render().asPng();
      writeFileSync(args.out!, png);
    } else {
      writeFileSync(args.out!, svg);
    }
    return 0;
  } catch (err) {
    if (
      err instanceof CsvFormatError ||
      err instanceof PlotDataError ||
      (err as NodeJS.ErrnoException).code === "ENOENT"
    ) {
      process.stderr.write(`error: ${(err as Error).message}\n`);
      return 1;
    }
    throw err;
  }
}

if (require.main === module) {
  process.exit(main(process.argv.slice(2)));
}
