export { readTable, schemaOf, expectSchema, column, SchemaError } from "./csv.js";
export type { Table } from "./csv.js";
export { diverging, zeroCenteredColor, symmetricLimit, LINE_PALETTE } from "./colormap.js";
export type { Rgb } from "./colormap.js";
export { encodePng } from "./png.js";
export { Raster } from "./raster.js";
export { loadPanelSpec, validatePanelSpec, renderPanel } from "./panels.js";
export type { PanelSpec, PanelType } from "./panels.js";
