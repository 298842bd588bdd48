/**
 * Deterministic SVG line-panel renderer.
 *
 * No timestamps, no randomness, fixed palette and layout, and numbers are
 * formatted with a fixed precision, so identical inputs produce identical
 * bytes. Infinite values cannot live on an axis; they are drawn as
 * clipped markers pinned to the top edge and the legend entry is
 * annotated. On log panels nonpositive finite values are skipped.
 */

export interface Series {
  name: string;
  x: number[];
  y: number[];
}

export interface PanelRender {
  title: string;
  xLabel: string;
  yLabel: string;
  logY: boolean;
  series: Series[];
  /** x position for a vertical dashed marker, with its legend label */
  marker?: { label: string; x: number };
}

const WIDTH = 720;
const HEIGHT = 440;
const MARGIN = { left: 70, right: 210, top: 40, bottom: 50 };
const PLOT_W = WIDTH - MARGIN.left - MARGIN.right;
const PLOT_H = HEIGHT - MARGIN.top - MARGIN.bottom;

const PALETTE = [
  "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
  "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#393b79", "#ad494a",
];

function fmt(v: number): string {
  if (!Number.isFinite(v)) return v > 0 ? "inf" : "-inf";
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 1e4 || a < 1e-3) return v.toExponential(2);
  return Number(v.toPrecision(6)).toString();
}

function px(v: number): string {
  return v.toFixed(2);
}

interface Scale {
  (v: number): number;
  min: number;
  max: number;
}

function makeScale(min: number, max: number, outA: number, outB: number, log: boolean): Scale {
  let lo = min;
  let hi = max;
  if (log) {
    lo = Math.log10(lo);
    hi = Math.log10(hi);
  }
  if (!(hi > lo)) {
    hi = lo + 1;
  }
  const f = (v: number): number => {
    const t = log ? Math.log10(v) : v;
    return outA + ((t - lo) / (hi - lo)) * (outB - outA);
  };
  const scale = f as Scale;
  scale.min = min;
  scale.max = max;
  return scale;
}

function finiteValues(panel: PanelRender): { xs: number[]; ys: number[] } {
  const xs: number[] = [];
  const ys: number[] = [];
  for (const s of panel.series) {
    for (let i = 0; i < s.x.length; i++) {
      const x = s.x[i];
      const y = s.y[i];
      if (!Number.isFinite(x)) continue;
      xs.push(x);
      if (Number.isFinite(y) && (!panel.logY || y > 0)) ys.push(y);
    }
  }
  if (panel.marker && Number.isFinite(panel.marker.x)) xs.push(panel.marker.x);
  return { xs, ys };
}

function xTicks(min: number, max: number): number[] {
  const n = 5;
  const out: number[] = [];
  for (let i = 0; i <= n; i++) out.push(min + ((max - min) * i) / n);
  return out;
}

function yTicksLog(min: number, max: number): number[] {
  const lo = Math.ceil(Math.log10(min) - 1e-9);
  const hi = Math.floor(Math.log10(max) + 1e-9);
  const out: number[] = [];
  for (let d = lo; d <= hi; d++) out.push(Math.pow(10, d));
  if (out.length === 0) out.push(min, max);
  return out;
}

export function renderPanelSvg(panel: PanelRender): string {
  const { xs, ys } = finiteValues(panel);
  if (xs.length === 0 || ys.length === 0) {
    throw new Error(`panel "${panel.title}" has no plottable data`);
  }
  const sx = makeScale(Math.min(...xs), Math.max(...xs), MARGIN.left, MARGIN.left + PLOT_W, false);
  const sy = makeScale(Math.min(...ys), Math.max(...ys), MARGIN.top + PLOT_H, MARGIN.top, panel.logY);

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" viewBox="0 0 ${WIDTH} ${HEIGHT}">`,
  );
  parts.push(`<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`);
  parts.push(
    `<text x="${MARGIN.left}" y="24" font-family="monospace" font-size="14">${escapeXml(panel.title)}</text>`,
  );
  parts.push(
    `<rect x="${MARGIN.left}" y="${MARGIN.top}" width="${PLOT_W}" height="${PLOT_H}" fill="none" stroke="#333" stroke-width="1"/>`,
  );

  for (const t of xTicks(sx.min, sx.max)) {
    const X = px(sx(t));
    parts.push(
      `<line x1="${X}" y1="${MARGIN.top + PLOT_H}" x2="${X}" y2="${MARGIN.top + PLOT_H + 5}" stroke="#333"/>`,
      `<text x="${X}" y="${MARGIN.top + PLOT_H + 18}" font-family="monospace" font-size="10" text-anchor="middle">${fmt(t)}</text>`,
    );
  }
  const yTicks = panel.logY
    ? yTicksLog(Math.min(...ys), Math.max(...ys))
    : xTicks(Math.min(...ys), Math.max(...ys));
  for (const t of yTicks) {
    const Y = px(sy(t));
    parts.push(
      `<line x1="${MARGIN.left - 5}" y1="${Y}" x2="${MARGIN.left}" y2="${Y}" stroke="#333"/>`,
      `<text x="${MARGIN.left - 8}" y="${Y}" font-family="monospace" font-size="10" text-anchor="end" dominant-baseline="middle">${fmt(t)}</text>`,
    );
  }
  parts.push(
    `<text x="${MARGIN.left + PLOT_W / 2}" y="${HEIGHT - 12}" font-family="monospace" font-size="12" text-anchor="middle">${escapeXml(panel.xLabel)}</text>`,
    `<text x="18" y="${MARGIN.top + PLOT_H / 2}" font-family="monospace" font-size="12" text-anchor="middle" transform="rotate(-90 18 ${MARGIN.top + PLOT_H / 2})">${escapeXml(panel.yLabel)}</text>`,
  );

  if (panel.marker && Number.isFinite(panel.marker.x)) {
    const X = px(sx(panel.marker.x));
    parts.push(
      `<line x1="${X}" y1="${MARGIN.top}" x2="${X}" y2="${MARGIN.top + PLOT_H}" stroke="#444" stroke-width="1" stroke-dasharray="5,4"/>`,
    );
  }

  const legend: string[] = [];
  panel.series.forEach((s, idx) => {
    const color = PALETTE[idx % PALETTE.length];
    const segments: string[][] = [[]];
    let clipped = 0;
    const clipMarkers: string[] = [];
    for (let i = 0; i < s.x.length; i++) {
      const x = s.x[i];
      const y = s.y[i];
      if (!Number.isFinite(x)) continue;
      if (y === Infinity) {
        clipped += 1;
        const X = px(sx(x));
        clipMarkers.push(
          `<path d="M ${X} ${MARGIN.top + 8} l -5 9 l 10 0 z" fill="${color}" data-series="${escapeXml(s.name)}" data-clipped="true"/>`,
        );
        segments.push([]);
        continue;
      }
      if (!Number.isFinite(y) || (panel.logY && y <= 0)) {
        segments.push([]);
        continue;
      }
      segments[segments.length - 1].push(`${px(sx(x))},${px(sy(y))}`);
    }
    for (const seg of segments) {
      if (seg.length > 1) {
        parts.push(
          `<polyline fill="none" stroke="${color}" stroke-width="1.5" data-series="${escapeXml(s.name)}" points="${seg.join(" ")}"/>`,
        );
      } else if (seg.length === 1) {
        const [pt] = seg;
        const [X, Y] = pt.split(",");
        parts.push(
          `<circle cx="${X}" cy="${Y}" r="2.5" fill="${color}" data-series="${escapeXml(s.name)}"/>`,
        );
      }
    }
    parts.push(...clipMarkers);
    legend.push(
      legendEntry(idx, color, s.name + (clipped > 0 ? ` (${clipped} clipped at +inf)` : "")),
    );
  });
  if (panel.marker && Number.isFinite(panel.marker.x)) {
    legend.push(
      legendEntry(
        panel.series.length,
        "#444",
        `${panel.marker.label} = ${fmt(panel.marker.x)}`,
        true,
      ),
    );
  }
  parts.push(`<g class="legend">${legend.join("")}</g>`);
  parts.push("</svg>");
  return parts.join("\n") + "\n";
}

function legendEntry(row: number, color: string, label: string, dashed = false): string {
  const x = MARGIN.left + PLOT_W + 14;
  const y = MARGIN.top + 10 + row * 18;
  const dash = dashed ? ` stroke-dasharray="5,4"` : "";
  return (
    `<line x1="${x}" y1="${y}" x2="${x + 18}" y2="${y}" stroke="${color}" stroke-width="2"${dash}/>` +
    `<text x="${x + 24}" y="${y + 4}" font-family="monospace" font-size="11" class="legend-label">${escapeXml(label)}</text>`
  );
}

function escapeXml(s: string): string {
  return s
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}
