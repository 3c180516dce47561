/** Contribution distribution plot: one horizontal band per feature, one
 * point per shot at its contribution value, the selected shot highlighted.
 * Point values are taken verbatim from service explanation documents. */

import type { ExplanationDoc } from './types.js';

export const NEUTRAL_BAND = 0.1;

export interface PlotPoint {
  feature_name: string;
  shot_id: string;
  value: number;
  cx: number;
  cy: number;
  highlighted: boolean;
}

export interface ContributionPlot {
  svg: string;
  points: PlotPoint[];
  maxAbs: number;
  xFor: (value: number) => number;
}

export interface PlotOptions {
  width?: number;
  rowHeight?: number;
  labelWidth?: number;
}

function fmt(value: number): string {
  return Number(value.toFixed(3)).toString();
}

export function contributionPlot(
  explanations: ExplanationDoc[],
  selectedShotId: string | null,
  options: PlotOptions = {},
): ContributionPlot {
  if (explanations.length === 0) {
    return { svg: '<svg class="contributions"></svg>', points: [], maxAbs: NEUTRAL_BAND, xFor: () => 0 };
  }
  const width = options.width ?? 640;
  const rowHeight = options.rowHeight ?? 30;
  const labelWidth = options.labelWidth ?? 230;

  const features = explanations[0]!.contributions.map((c) => c.feature_name);
  const values = explanations.flatMap((e) => e.contributions.map((c) => Math.abs(c.value)));
  const maxAbs = Math.max(NEUTRAL_BAND * 1.5, ...values) * 1.05;
  const plotLeft = labelWidth;
  const plotWidth = width - labelWidth - 10;
  const xFor = (value: number) => plotLeft + ((value + maxAbs) / (2 * maxAbs)) * plotWidth;
  const height = features.length * rowHeight + 24;

  const parts: string[] = [];
  parts.push(
    `<svg class="contributions" viewBox="0 0 ${width} ${height}" xmlns="http://www.w3.org/2000/svg">`,
  );
  // neutral band and zero line span all feature rows
  parts.push(
    `<rect class="neutral-band" x="${fmt(xFor(-NEUTRAL_BAND))}" y="0" ` +
      `width="${fmt(xFor(NEUTRAL_BAND) - xFor(-NEUTRAL_BAND))}" height="${features.length * rowHeight}"/>`,
  );
  parts.push(
    `<line class="zero-line" x1="${fmt(xFor(0))}" y1="0" x2="${fmt(xFor(0))}" y2="${features.length * rowHeight}"/>`,
  );

  const points: PlotPoint[] = [];
  features.forEach((feature, row) => {
    const cy = row * rowHeight + rowHeight / 2;
    parts.push(
      `<text class="feature-label" x="${labelWidth - 8}" y="${fmt(cy + 4)}" text-anchor="end">${feature}</text>`,
    );
    parts.push(
      `<line class="band-line" x1="${plotLeft}" y1="${fmt(cy)}" x2="${width - 10}" y2="${fmt(cy)}"/>`,
    );
  });

  // draw unselected points first so the highlighted shot stays on top
  for (const highlightedPass of [false, true]) {
    for (const explanation of explanations) {
      const highlighted = explanation.shot_id === selectedShotId;
      if (highlighted !== highlightedPass) continue;
      for (const contribution of explanation.contributions) {
        const row = features.indexOf(contribution.feature_name);
        if (row < 0) continue;
        const point: PlotPoint = {
          feature_name: contribution.feature_name,
          shot_id: explanation.shot_id,
          value: contribution.value,
          cx: xFor(contribution.value),
          cy: row * rowHeight + rowHeight / 2,
          highlighted,
        };
        points.push(point);
        parts.push(
          `<circle class="point${highlighted ? ' highlighted' : ''}" ` +
            `data-feature="${contribution.feature_name}" data-shot="${explanation.shot_id}" ` +
            `data-value="${contribution.value}" cx="${fmt(point.cx)}" cy="${fmt(point.cy)}" ` +
            `r="${highlighted ? 6 : 3.5}"/>`,
        );
      }
    }
  }

  const axisY = features.length * rowHeight + 16;
  parts.push(
    `<text class="axis" x="${fmt(xFor(-maxAbs / 1.05))}" y="${axisY}">decreases xG</text>`,
  );
  parts.push(
    `<text class="axis" x="${fmt(xFor(maxAbs / 1.05))}" y="${axisY}" text-anchor="end">increases xG</text>`,
  );
  parts.push('</svg>');
  return { svg: parts.join(''), points, maxAbs, xFor };
}
