/**
 * Deterministic SVG line chart of log_e(e_T) against the horizon T.
 *
 * A pure string builder: the same series always produce byte-identical SVG,
 * which keeps the output diffable and golden-testable. No statistics are
 * computed here; values are plotted exactly as they appear in the CSV.
 * Each marker carries the source values in data-t / data-log attributes.
 */

import { Series } from "./csv";

export class PlotDataError extends Error {}

export interface PlotOptions {
  title?: string;
  ci?: boolean;
  width?: number;
  height?: number;
}

const COLORS: Record<string, string> = {
  csr: "#1f77b4",
  if: "#ff7f0e",
  sr: "#2ca02c",
};

const MARGIN = { top: 44, right: 24, bottom: 52, left: 68 };

/** Fixed-point pixel coordinate (2 decimals) so output is platform-stable. */
function px(value: number): string {
  return value.toFixed(2);
}

/** Shortest round-trip decimal for data attributes (mirrors the CSV values). */
function data(value: number): string {
  return String(value);
}

function niceTicks(lo: number, hi: number, count: number): number[] {
  if (lo === hi) {
    return [lo];
  }
  const span = hi - lo;
  const rawStep = span / Math.max(1, count);
  const power = Math.pow(10, Math.floor(Math.log10(rawStep)));
  let step = power;
  for (const mult of [1, 2, 5, 10]) {
    step = mult * power;
    if (span / step <= count) break;
  }
  const ticks: number[] = [];
  for (let v = Math.ceil(lo / step) * step; v <= hi + 1e-9 * span; v += step) {
    ticks.push(Math.abs(v) < 1e-12 ? 0 : v);
  }
  return ticks;
}

function tickLabel(value: number): string {
  const rounded = Math.round(value * 1e6) / 1e6;
  return String(rounded);
}

interface Scale {
  (value: number): number;
}

function linearScale(d0: number, d1: number, r0: number, r1: number): Scale {
  const span = d1 - d0 || 1;
  return (value) => r0 + ((value - d0) / span) * (r1 - r0);
}

export function buildFigureSvg(
  instanceId: string,
  seriesList: Series[],
  options: PlotOptions = {},
): string {
  const width = options.width ?? 720;
  const height = options.height ?? 480;
  const ci = options.ci ?? false;
  if (seriesList.length === 0) {
    throw new PlotDataError("nothing to plot: no series selected");
  }

  const finite = seriesList.map((s) => s.points.filter((p) => Number.isFinite(p.logEHat)));
  const dropped = seriesList.map((s, idx) => s.points.length - finite[idx].length);
  const plotted = finite.flat();
  if (plotted.length === 0) {
    throw new PlotDataError("nothing to plot: every cell has log_e(e_T) = -inf");
  }

  const xs = plotted.map((p) => p.T);
  let ys = plotted.map((p) => p.logEHat);
  if (ci) {
    const bandYs = plotted
      .filter((p) => p.ciLo > 0)
      .flatMap((p) => [Math.log(p.ciLo), Math.log(p.ciHi)]);
    ys = ys.concat(bandYs);
  }
  const xLo = Math.min(...xs);
  const xHi = Math.max(...xs);
  const yLo = Math.min(...ys);
  const yHi = Math.max(...ys);
  const xPad = (xHi - xLo || 1) * 0.05;
  const yPad = (yHi - yLo || 1) * 0.06;
  const x = linearScale(xLo - xPad, xHi + xPad, MARGIN.left, width - MARGIN.right);
  const y = linearScale(yLo - yPad, yHi + yPad, height - MARGIN.bottom, MARGIN.top);

  const uniqueTs = [...new Set(xs)].sort((a, b) => a - b);
  const xTicks = uniqueTs.length <= 12 ? uniqueTs : niceTicks(xLo, xHi, 8);
  const yTicks = niceTicks(yLo - yPad, yHi + yPad, 7);

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
      `viewBox="0 0 ${width} ${height}" font-family="Helvetica, Arial, sans-serif">`,
  );
  parts.push(`<rect width="${width}" height="${height}" fill="white"/>`);
  const title = options.title ?? `Error probability decay on ${instanceId}`;
  parts.push(
    `<text x="${px(width / 2)}" y="24" text-anchor="middle" font-size="16">${escapeXml(title)}</text>`,
  );

  // gridlines and ticks
  for (const t of yTicks) {
    const yy = y(t);
    parts.push(
      `<line x1="${px(MARGIN.left)}" y1="${px(yy)}" x2="${px(width - MARGIN.right)}" ` +
        `y2="${px(yy)}" stroke="#dddddd" stroke-width="1"/>`,
    );
    parts.push(
      `<text x="${px(MARGIN.left - 8)}" y="${px(yy + 4)}" text-anchor="end" ` +
        `font-size="11">${tickLabel(t)}</text>`,
    );
  }
  for (const t of xTicks) {
    const xx = x(t);
    parts.push(
      `<line x1="${px(xx)}" y1="${px(height - MARGIN.bottom)}" x2="${px(xx)}" ` +
        `y2="${px(height - MARGIN.bottom + 5)}" stroke="#444444" stroke-width="1"/>`,
    );
    parts.push(
      `<text x="${px(xx)}" y="${px(height - MARGIN.bottom + 18)}" text-anchor="middle" ` +
        `font-size="11">${tickLabel(t)}</text>`,
    );
  }

  // axes
  parts.push(
    `<line x1="${px(MARGIN.left)}" y1="${px(MARGIN.top)}" x2="${px(MARGIN.left)}" ` +
      `y2="${px(height - MARGIN.bottom)}" stroke="#444444" stroke-width="1"/>`,
  );
  parts.push(
    `<line x1="${px(MARGIN.left)}" y1="${px(height - MARGIN.bottom)}" ` +
      `x2="${px(width - MARGIN.right)}" y2="${px(height - MARGIN.bottom)}" ` +
      `stroke="#444444" stroke-width="1"/>`,
  );
  parts.push(
    `<text x="${px((MARGIN.left + width - MARGIN.right) / 2)}" y="${px(height - 14)}" ` +
      `text-anchor="middle" font-size="13">T</text>`,
  );
  parts.push(
    `<text x="18" y="${px((MARGIN.top + height - MARGIN.bottom) / 2)}" text-anchor="middle" ` +
      `font-size="13" transform="rotate(-90 18 ${px((MARGIN.top + height - MARGIN.bottom) / 2)})">` +
      `log_e(e_T)</text>`,
  );

  // series
  seriesList.forEach((series, idx) => {
    const color = COLORS[series.algorithm] ?? "#7f7f7f";
    const points = finite[idx];
    if (ci) {
      const band = points.filter((p) => p.ciLo > 0);
      if (band.length >= 2) {
        const upper = band.map((p) => `${px(x(p.T))},${px(y(Math.log(p.ciHi)))}`);
        const lower = band
          .slice()
          .reverse()
          .map((p) => `${px(x(p.T))},${px(y(Math.log(p.ciLo)))}`);
        parts.push(
          `<polygon points="${upper.join(" ")} ${lower.join(" ")}" fill="${color}" ` +
            `fill-opacity="0.15" stroke="none"/>`,
        );
      }
    }
    if (points.length >= 2) {
      const path = points.map((p) => `${px(x(p.T))},${px(y(p.logEHat))}`).join(" ");
      parts.push(
        `<polyline points="${path}" fill="none" stroke="${color}" stroke-width="1.8"/>`,
      );
    }
    for (const p of points) {
      parts.push(
        `<circle cx="${px(x(p.T))}" cy="${px(y(p.logEHat))}" r="3.5" fill="${color}" ` +
          `data-algorithm="${series.algorithm}" data-t="${data(p.T)}" data-log="${data(p.logEHat)}"/>`,
      );
    }
  });

  // legend
  const legendX = width - MARGIN.right - 180;
  seriesList.forEach((series, idx) => {
    const color = COLORS[series.algorithm] ?? "#7f7f7f";
    const yy = MARGIN.top + 10 + idx * 18;
    parts.push(
      `<line x1="${px(legendX)}" y1="${px(yy)}" x2="${px(legendX + 26)}" y2="${px(yy)}" ` +
        `stroke="${color}" stroke-width="1.8"/>`,
    );
    parts.push(
      `<circle cx="${px(legendX + 13)}" cy="${px(yy)}" r="3.5" fill="${color}"/>`,
    );
    parts.push(
      `<text x="${px(legendX + 32)}" y="${px(yy + 4)}" font-size="12">${escapeXml(series.label)}</text>`,
    );
  });

  // caption note for dropped zero-error cells
  const notes = seriesList
    .map((series, idx) =>
      dropped[idx] > 0 ? `${series.label}: ${dropped[idx]} zero-error cell(s) omitted` : "",
    )
    .filter((note) => note.length > 0);
  if (notes.length > 0) {
    parts.push(
      `<text x="${px(MARGIN.left)}" y="${px(height - 2)}" font-size="10" fill="#666666">` +
        `note: ${escapeXml(notes.join("; "))}</text>`,
    );
  }

  parts.push("</svg>");
  return parts.join("\n") + "\n";
}

function escapeXml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}
