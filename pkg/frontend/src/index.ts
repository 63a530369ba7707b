export { FigureSpec, FigureKind, FIGURE_KINDS, loadFigureSpec, parseFigureSpec } from "./figspec.js";
export { render } from "./render.js";
export { renderFigure } from "./plots.js";
export { MissingColumnError, readCsv, column, hasColumn, Table } from "./csv.js";
export { readJson, numberArray, hasField, JsonDoc } from "./artifacts.js";
export { svgDocument, panel, tickLabel, px, escapeXml, PALETTE } from "./svg.js";
