/**
 * Figure rendering: CSV files in, one SVG per panel out.
 */

import * as fs from "fs";
import * as path from "path";

import { parseCsv, requireColumn, CsvTable } from "./csv";
import { FIGURE_FILES, PanelSpec, panelsForFile } from "./spec";
import { PanelRender, renderPanelSvg } from "./svg";

export class UnknownFigure extends Error {}
export class MissingInput extends Error {}

export interface RenderedPanel {
  fileName: string;
  svg: string;
}

export function panelToRender(fileName: string, table: CsvTable, spec: PanelSpec): PanelRender {
  const x = requireColumn(table, spec.x);
  const series = spec.series.map((name) => ({
    name,
    x,
    y: requireColumn(table, name),
  }));
  let marker: PanelRender["marker"];
  if (spec.markerColumn !== undefined) {
    const values = requireColumn(table, spec.markerColumn);
    marker = { label: spec.markerColumn, x: values[0] };
  }
  return {
    title: `${fileName} — ${spec.id}`,
    xLabel: spec.x,
    yLabel: spec.yLabel ?? "",
    logY: spec.logY,
    series,
    marker,
  };
}

export function renderCsv(fileName: string, text: string): RenderedPanel[] {
  const table = parseCsv(text);
  const stem = fileName.replace(/\.csv$/, "");
  const out: RenderedPanel[] = [];
  for (const spec of panelsForFile(fileName, table)) {
    if (spec.series.length === 0) continue;
    out.push({
      fileName: `${stem}_${spec.id}.svg`,
      svg: renderPanelSvg(panelToRender(fileName, table, spec)),
    });
  }
  return out;
}

export function renderFigure(figureId: string, inputDir: string): RenderedPanel[] {
  const files = FIGURE_FILES[figureId];
  if (files === undefined) {
    throw new UnknownFigure(
      `unknown figure "${figureId}"; known: ${Object.keys(FIGURE_FILES).join(", ")}`,
    );
  }
  const out: RenderedPanel[] = [];
  for (const name of files) {
    const full = path.join(inputDir, name);
    if (!fs.existsSync(full)) {
      throw new MissingInput(`input CSV not found: ${full}`);
    }
    out.push(...renderCsv(name, fs.readFileSync(full, "utf8")));
  }
  return out;
}

export function writePanels(panels: RenderedPanel[], outDir: string): string[] {
  fs.mkdirSync(outDir, { recursive: true });
  const written: string[] = [];
  for (const panel of panels) {
    const full = path.join(outDir, panel.fileName);
    fs.writeFileSync(full, panel.svg, "utf8");
    written.push(full);
  }
  return written;
}
