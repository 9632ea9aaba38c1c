import type { TermInfo, VariableInfo } from './types.js';

export const VIEW_W = 640;
export const VIEW_H = 220;
export const PAD = 24;

/** Corner points of one trapezoid in domain coordinates:
 * (A,0) (B,1) (C,1) (D,0). Zero-width ramps yield vertical edges. */
export function trapezoidPoints(term: TermInfo): Array<[number, number]> {
  return [
    [term.A, 0],
    [term.B, 1],
    [term.C, 1],
    [term.D, 0],
  ];
}

export function mapX(x: number, domain: [number, number]): number {
  const [lo, hi] = domain;
  const span = Math.max(hi - lo, 1e-9);
  return PAD + ((x - lo) / span) * (VIEW_W - 2 * PAD);
}

export function mapY(mu: number): number {
  return VIEW_H - PAD - mu * (VIEW_H - 2 * PAD);
}

export function toPolylinePoints(
  pts: Array<[number, number]>,
  domain: [number, number],
): string {
  return pts
    .map(([x, mu]) => `${mapX(x, domain).toFixed(1)},${mapY(mu).toFixed(1)}`)
    .join(' ');
}

const COLORS = ['#2563eb', '#d97706', '#059669', '#db2777', '#7c3aed'];

/** SVG markup for a variable: one labelled polyline per term. */
export function variableChartSvg(variable: VariableInfo): string {
  const lines = variable.terms.map((term, i) => {
    const points = toPolylinePoints(trapezoidPoints(term), variable.domain);
    const color = COLORS[i % COLORS.length];
    const labelX = mapX((term.B + term.C) / 2, variable.domain).toFixed(1);
    return (
      `<polyline class="mf-trapezoid" data-term="${term.name}" ` +
      `points="${points}" fill="none" stroke="${color}" stroke-width="2"/>` +
      `<text x="${labelX}" y="${(PAD - 8).toFixed(1)}" text-anchor="middle" ` +
      `fill="${color}" font-size="12">${term.label}</text>`
    );
  });
  const axisY = mapY(0).toFixed(1);
  const axis =
    `<line x1="${PAD}" y1="${axisY}" x2="${VIEW_W - PAD}" y2="${axisY}" ` +
    `stroke="#9ca3af" stroke-width="1"/>`;
  const [lo, hi] = variable.domain;
  const ticks =
    `<text x="${PAD}" y="${VIEW_H - 6}" font-size="11" fill="#6b7280">${lo}</text>` +
    `<text x="${VIEW_W - PAD}" y="${VIEW_H - 6}" text-anchor="end" ` +
    `font-size="11" fill="#6b7280">${hi}</text>`;
  return (
    `<svg viewBox="0 0 ${VIEW_W} ${VIEW_H}" role="img" ` +
    `aria-label="membership functions of ${variable.attribute}">` +
    axis + ticks + lines.join('') + '</svg>'
  );
}
