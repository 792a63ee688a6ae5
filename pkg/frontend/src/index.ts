export { CSV_HEADER, CsvFormatError, parseResultsCsv, selectSeries, ALGORITHM_LABELS } from "./csv";
export type { ErrorRecord, Series } from "./csv";
export { buildFigureSvg, PlotDataError } from "./svg";
export type { PlotOptions } from "./svg";
