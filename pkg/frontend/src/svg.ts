/**
 * Minimal deterministic SVG builders: everything is emitted from the data
 * with fixed styling, so identical inputs give byte-identical files.
 */

export interface Series {
  label: string;
  x: number[];
  y: number[];
}

const WIDTH = 720;
const HEIGHT = 480;
const MARGIN = { top: 40, right: 30, bottom: 55, left: 80 };
const PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

function fmt(v: number): string {
  // fixed short representation to keep output stable and readable
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 1e5 || a < 1e-3) return v.toExponential(2);
  return Number(v.toPrecision(6)).toString();
}

function extent(values: number[]): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of values) {
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  if (lo === Infinity) throw new Error("empty data");
  if (lo === hi) {
    // flat data: pad so the line sits mid-plot
    lo -= 0.5;
    hi += 0.5;
  }
  return [lo, hi];
}

function ticks(lo: number, hi: number, n = 6): number[] {
  const out: number[] = [];
  for (let i = 0; i <= n; i++) out.push(lo + ((hi - lo) * i) / n);
  return out;
}

function scale(lo: number, hi: number, a: number, b: number): (v: number) => number {
  const k = (b - a) / (hi - lo);
  return (v: number) => a + (v - lo) * k;
}

export function lineChart(
  series: Series[],
  title: string,
  xLabel: string,
  yLabel: string,
): string {
  const [xLo, xHi] = extent(series.flatMap((s) => s.x));
  const [yLo, yHi] = extent(series.flatMap((s) => s.y));
  const sx = scale(xLo, xHi, MARGIN.left, WIDTH - MARGIN.right);
  const sy = scale(yLo, yHi, HEIGHT - MARGIN.bottom, MARGIN.top);

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" viewBox="0 0 ${WIDTH} ${HEIGHT}" font-family="sans-serif">`,
  );
  parts.push(`<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`);
  parts.push(
    `<text x="${WIDTH / 2}" y="22" text-anchor="middle" font-size="16">${title}</text>`,
  );

  for (const t of ticks(xLo, xHi)) {
    const px = sx(t).toFixed(2);
    parts.push(
      `<line x1="${px}" y1="${MARGIN.top}" x2="${px}" y2="${HEIGHT - MARGIN.bottom}" stroke="#dddddd"/>`,
      `<text x="${px}" y="${HEIGHT - MARGIN.bottom + 18}" text-anchor="middle" font-size="11">${fmt(t)}</text>`,
    );
  }
  for (const t of ticks(yLo, yHi)) {
    const py = sy(t).toFixed(2);
    parts.push(
      `<line x1="${MARGIN.left}" y1="${py}" x2="${WIDTH - MARGIN.right}" y2="${py}" stroke="#dddddd"/>`,
      `<text x="${MARGIN.left - 8}" y="${py}" text-anchor="end" dominant-baseline="middle" font-size="11">${fmt(t)}</text>`,
    );
  }
  parts.push(
    `<rect x="${MARGIN.left}" y="${MARGIN.top}" width="${WIDTH - MARGIN.left - MARGIN.right}" height="${HEIGHT - MARGIN.top - MARGIN.bottom}" fill="none" stroke="#333333"/>`,
  );
  parts.push(
    `<text x="${WIDTH / 2}" y="${HEIGHT - 12}" text-anchor="middle" font-size="13">${xLabel}</text>`,
    `<text x="18" y="${HEIGHT / 2}" text-anchor="middle" font-size="13" transform="rotate(-90 18 ${HEIGHT / 2})">${yLabel}</text>`,
  );

  series.forEach((s, i) => {
    const color = PALETTE[i % PALETTE.length];
    const pts = s.x
      .map((xv, j) => `${sx(xv).toFixed(2)},${sy(s.y[j]).toFixed(2)}`)
      .join(" ");
    parts.push(
      `<polyline points="${pts}" fill="none" stroke="${color}" stroke-width="1.8"/>`,
    );
    const ly = MARGIN.top + 16 + i * 18;
    parts.push(
      `<line x1="${WIDTH - MARGIN.right - 150}" y1="${ly}" x2="${WIDTH - MARGIN.right - 125}" y2="${ly}" stroke="${color}" stroke-width="1.8"/>`,
      `<text x="${WIDTH - MARGIN.right - 118}" y="${ly + 4}" font-size="12">${s.label}</text>`,
    );
  });
  parts.push("</svg>");
  return parts.join("\n") + "\n";
}

/** Two-tone heatmap for an (epsilon, time) surface; flat data renders a
 * single uniform color. */
export function heatmap(
  epsilons: number[],
  times: number[],
  values: number[][],
  title: string,
): string {
  const flatValues = values.flat();
  let lo = Math.min(...flatValues);
  let hi = Math.max(...flatValues);
  const flat = lo === hi;
  if (flat) hi = lo + 1;

  const plotW = WIDTH - MARGIN.left - MARGIN.right;
  const plotH = HEIGHT - MARGIN.top - MARGIN.bottom;
  const cw = plotW / times.length;
  const ch = plotH / epsilons.length;

  const color = (v: number): string => {
    const t = (v - lo) / (hi - lo);
    const r = Math.round(255 * t);
    const b = Math.round(255 * (1 - t));
    const g = Math.round(64 + 96 * (1 - Math.abs(2 * t - 1)));
    return `rgb(${r},${g},${b})`;
  };

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" viewBox="0 0 ${WIDTH} ${HEIGHT}" font-family="sans-serif">`,
  );
  parts.push(`<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`);
  parts.push(
    `<text x="${WIDTH / 2}" y="22" text-anchor="middle" font-size="16">${title}</text>`,
  );
  for (let i = 0; i < epsilons.length; i++) {
    for (let j = 0; j < times.length; j++) {
      const x = (MARGIN.left + j * cw).toFixed(2);
      // epsilon increases upward
      const y = (MARGIN.top + (epsilons.length - 1 - i) * ch).toFixed(2);
      parts.push(
        `<rect x="${x}" y="${y}" width="${(cw + 0.5).toFixed(2)}" height="${(ch + 0.5).toFixed(2)}" fill="${color(values[i][j])}"/>`,
      );
    }
  }
  parts.push(
    `<rect x="${MARGIN.left}" y="${MARGIN.top}" width="${plotW}" height="${plotH}" fill="none" stroke="#333333"/>`,
    `<text x="${WIDTH / 2}" y="${HEIGHT - 12}" text-anchor="middle" font-size="13">time (years): ${fmt(times[0])} to ${fmt(times[times.length - 1])}</text>`,
    `<text x="18" y="${HEIGHT / 2}" text-anchor="middle" font-size="13" transform="rotate(-90 18 ${HEIGHT / 2})">effort bound: ${fmt(epsilons[0])} to ${fmt(epsilons[epsilons.length - 1])}</text>`,
    `<text x="${MARGIN.left}" y="${HEIGHT - MARGIN.bottom + 18}" font-size="11">value range: ${flat ? `${fmt(lo)} (uniform)` : `${fmt(lo)} to ${fmt(hi)}`}</text>`,
  );
  parts.push("</svg>");
  return parts.join("\n") + "\n";
}
