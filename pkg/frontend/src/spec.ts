/**
 * Figure specifications: which CSV feeds which panels and how.
 *
 * Every numeric non-axis column of an input CSV is displayed somewhere:
 * either as a line series in one of the panels or, for `switch_beta`, as
 * the vertical marker on preconditioned panels. The renderer never
 * computes mathematics; it only displays columns.
 */

import { CsvTable, isNumericColumn } from "./csv";

export interface PanelSpec {
  /** suffix for the output file name */
  id: string;
  /** x-axis column */
  x: string;
  /** series columns, in legend order */
  series: string[];
  /** log10 y axis (nonpositive values skipped, inf clipped) */
  logY: boolean;
  /** column holding the vertical-marker position, if any */
  markerColumn?: string;
  yLabel?: string;
}

export interface FigureSpec {
  figureId: string;
  /** CSV file name -> panels fed by that file */
  files: Map<string, PanelSpec[]>;
}

/** Columns that are never series: the x axis and the flag column. */
const NON_SERIES = new Set(["flag"]);
const MARKER_COLUMN = "switch_beta";

/**
 * Generic panel split for a sweep CSV: raw-value columns on a log panel,
 * log10_* companions on a linear panel, switch_beta as the marker.
 */
export function defaultPanels(table: CsvTable, xColumn: string): PanelSpec[] {
  const seriesCols = table.header.filter(
    (name) =>
      name !== xColumn &&
      !NON_SERIES.has(name) &&
      name !== MARKER_COLUMN &&
      isNumericColumn(table, name),
  );
  const logView = seriesCols.filter((c) => c.startsWith("log10_"));
  const rawView = seriesCols.filter((c) => !c.startsWith("log10_"));
  const marker = table.header.includes(MARKER_COLUMN) ? MARKER_COLUMN : undefined;
  const panels: PanelSpec[] = [];
  if (rawView.length > 0) {
    panels.push({
      id: "values",
      x: xColumn,
      series: rawView,
      logY: true,
      markerColumn: marker,
      yLabel: "value (log scale)",
    });
  }
  if (logView.length > 0) {
    panels.push({
      id: "log10",
      x: xColumn,
      series: logView,
      logY: false,
      markerColumn: marker,
      yLabel: "log10 value",
    });
  }
  return panels;
}

/** CG study CSVs get a kappa panel, an iterations panel, and a run panel. */
export function cgPanels(table: CsvTable): PanelSpec[] {
  const bounds = table.header.filter((name) => name.startsWith("bound_upper"));
  const known = new Set(["beta", "kappa", "iterations", "flag", ...bounds]);
  const rest = table.header.filter(
    (name) => !known.has(name) && isNumericColumn(table, name),
  );
  return [
    {
      id: "kappa",
      x: "beta",
      series: ["kappa", ...bounds],
      logY: true,
      yLabel: "condition number (log scale)",
    },
    { id: "iterations", x: "beta", series: ["iterations"], logY: false, yLabel: "CG iterations" },
    { id: "run", x: "beta", series: rest, logY: false, yLabel: "run settings" },
  ];
}

export function eigencurvePanels(): PanelSpec[] {
  return [
    {
      id: "curve",
      x: "L",
      series: ["lambda1_B0", "lambda1_Pf_mean", "lambda1_Pf_std"],
      logY: false,
      yLabel: "largest eigenvalue",
    },
  ];
}

/** File-name driven dispatch; unknown sweep CSVs fall back to defaultPanels. */
export function panelsForFile(fileName: string, table: CsvTable): PanelSpec[] {
  if (fileName.endsWith("_cg.csv")) {
    return cgPanels(table);
  }
  if (fileName.endsWith("_eigencurve.csv")) {
    return eigencurvePanels();
  }
  const x = table.header[0];
  return defaultPanels(table, x);
}

export const FIGURE_FILES: Record<string, string[]> = {
  fig1: ["fig1_unpreconditioned.csv", "fig1_preconditioned.csv"],
  fig2: ["fig2_eigencurve.csv"],
  fig3: ["fig3a_L0.csv", "fig3b_Lens.csv", "fig3c_sigma2_Pf.csv", "fig3d_sigma2_B0.csv"],
  fig4: ["fig4a_sigma2_R.csv", "fig4b_H_variant.csv", "fig4c_p.csv"],
  fig5: ["fig5a_L0.csv", "fig5b_Lens.csv", "fig5c_sigma2_Pf.csv", "fig5d_sigma2_B0.csv"],
  fig6: ["fig6a_sigma2_R.csv", "fig6b_H_variant.csv", "fig6c_p.csv"],
  fig7: ["fig7_cg.csv"],
  fig8: ["fig8_cg.csv"],
};
