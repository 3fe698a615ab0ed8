export {
  groupBy,
  parseRocCsv,
  parseRrmseCsv,
  ROC_COLUMNS,
  RRMSE_COLUMNS,
  SchemaError,
} from "./schema";
export type { RocRow, RrmseRow } from "./schema";
export {
  DEFAULT_ROC_GROUP,
  DEFAULT_RRMSE_GROUP,
  renderRoc,
  renderRrmse,
} from "./figure";
export type { FigureKind, FigureSpec } from "./figure";
export { main, runPlot } from "./cli";
