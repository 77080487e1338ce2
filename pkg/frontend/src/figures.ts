/**
 * Figure assembly: turns the solver's CSV artifacts into SVG figures.
 *
 * A figure spec names a kind (front, dynamics, slice, surface), one or more
 * input directories holding the CSV outputs of a sweep or simulate run, an
 * optional quantity, and the output path.
 */

import { writeFileSync, readdirSync } from "node:fs";
import { join, basename } from "node:path";
import { readCsv, column, textColumn } from "./csv.js";
import { lineChart, heatmap, Series } from "./svg.js";

export type FigureKind = "front" | "dynamics" | "slice" | "surface";

export interface FigureSpec {
  kind: FigureKind;
  inputs: string[];
  quantity?: string;
  output: string;
  format: string;
}

export const SURFACE_QUANTITIES = ["u1", "u2", "u1+u2", "A", "A_T", "A+A_T"];

function checkFormat(spec: FigureSpec): void {
  if (spec.format !== "svg") {
    throw new Error(
      `unsupported format "${spec.format}": only svg output is deterministic here`,
    );
  }
}

function loadColumns(dir: string, file: string, names: string[]): number[][] {
  const path = join(dir, file);
  const table = readCsv(path);
  return names.map((n) => column(table, path, n));
}

/** One trade-off curve per input directory (one sweep per MOP). */
export function renderFront(spec: FigureSpec): string {
  checkFormat(spec);
  const series: Series[] = spec.inputs.map((dir) => {
    const [f2, f1] = loadColumns(dir, "front.csv", ["f2", "f1"]);
    return { label: basename(dir), x: f2, y: f1 };
  });
  const svg = lineChart(
    series,
    "Trade-off curves",
    "treatment effort f2",
    "disease burden f1",
  );
  writeFileSync(spec.output, svg);
  return spec.output;
}

/** Compartment trajectories from a simulate run (states_0.csv). */
export function renderDynamics(spec: FigureSpec): string {
  checkFormat(spec);
  const dir = spec.inputs[0];
  const quantities = spec.quantity ? [spec.quantity] : ["A", "A_T"];
  const path = join(dir, "states_0.csv");
  const table = readCsv(path);
  const time = column(table, path, "time");
  const series: Series[] = quantities.map((q) => ({
    label: q,
    x: time,
    y: stateQuantity(table, path, q),
  }));
  const svg = lineChart(series, "Dynamics", "time (years)", "individuals");
  writeFileSync(spec.output, svg);
  return spec.output;
}

function stateQuantity(
  table: ReturnType<typeof readCsv>,
  path: string,
  quantity: string,
): number[] {
  // composite quantities are sums of state columns, e.g. A+A_T
  const terms = quantity.split("+");
  const cols = terms.map((t) => column(table, path, t));
  return cols[0].map((_, i) => cols.reduce((acc, c) => acc + c[i], 0));
}

/** Controls and infected compartments for one slice directory. */
export function renderSlice(spec: FigureSpec): string {
  checkFormat(spec);
  const dir = spec.inputs[0];
  const cFile = findFirst(dir, "controls");
  const sFile = findFirst(dir, "states");
  const controls = readCsv(cFile);
  const states = readCsv(sFile);
  const time = column(controls, cFile, "time");
  const series: Series[] = [
    { label: "u1", x: time, y: column(controls, cFile, "u1") },
    { label: "u2", x: time, y: column(controls, cFile, "u2") },
  ];
  const svg = lineChart(series, "Slice controls", "time (years)", "control level");
  writeFileSync(spec.output, svg);

  const quantity = spec.quantity ?? "A+A_T";
  const stSeries: Series[] = [
    {
      label: quantity,
      x: column(states, sFile, "time"),
      y: stateQuantity(states, sFile, quantity),
    },
  ];
  const stOut = spec.output.replace(/\.svg$/, "_states.svg");
  writeFileSync(
    stOut,
    lineChart(stSeries, "Slice dynamics", "time (years)", "individuals"),
  );
  return spec.output;
}

function findFirst(dir: string, prefix: string): string {
  const names = readdirSync(dir)
    .filter((n) => n.startsWith(prefix) && n.endsWith(".csv"))
    .sort();
  if (names.length === 0) {
    throw new Error(`${dir}: no ${prefix}_*.csv file found`);
  }
  return join(dir, names[0]);
}

/** Heatmap of one surface quantity over (epsilon, time). */
export function renderSurface(spec: FigureSpec): string {
  checkFormat(spec);
  const dir = spec.inputs[0];
  const quantity = spec.quantity ?? "u1+u2";
  if (!SURFACE_QUANTITIES.includes(quantity)) {
    throw new Error(
      `unknown surface quantity "${quantity}" (have: ${SURFACE_QUANTITIES.join(", ")})`,
    );
  }
  const path = join(dir, "surfaces.csv");
  const table = readCsv(path);
  const names = textColumn(table, path, "quantity");
  const eps = column(table, path, "epsilon");
  const time = column(table, path, "time");
  const value = column(table, path, "value");

  const epsSet: number[] = [];
  const timeSet: number[] = [];
  for (let i = 0; i < names.length; i++) {
    if (names[i] !== quantity) continue;
    if (!epsSet.includes(eps[i])) epsSet.push(eps[i]);
    if (!timeSet.includes(time[i])) timeSet.push(time[i]);
  }
  if (epsSet.length === 0) {
    throw new Error(`${path}: no rows for quantity "${quantity}"`);
  }
  const grid: number[][] = epsSet.map(() => new Array(timeSet.length).fill(0));
  for (let i = 0; i < names.length; i++) {
    if (names[i] !== quantity) continue;
    grid[epsSet.indexOf(eps[i])][timeSet.indexOf(time[i])] = value[i];
  }
  const svg = heatmap(epsSet, timeSet, grid, `Optimal surface: ${quantity}`);
  writeFileSync(spec.output, svg);
  return spec.output;
}

export function render(spec: FigureSpec): string {
  if (spec.inputs.length === 0) {
    throw new Error("at least one input directory is required");
  }
  switch (spec.kind) {
    case "front":
      return renderFront(spec);
    case "dynamics":
      return renderDynamics(spec);
    case "slice":
      return renderSlice(spec);
    case "surface":
      return renderSurface(spec);
    default:
      throw new Error(`unknown figure kind "${(spec as FigureSpec).kind}"`);
  }
}
