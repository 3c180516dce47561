import { describe, expect, it } from 'vitest';

import { NEUTRAL_BAND, contributionPlot } from '../src/contributions.js';
import type { ContributionDoc, ExplanationDoc } from '../src/types.js';

const FEATURES = ['distance_to_goal', 'angle_to_gk', 'opponents_in_triangle'];

function explanation(shotId: string, values: number[]): ExplanationDoc {
  const contributions: ContributionDoc[] = FEATURES.map((feature_name, index) => ({
    feature_name,
    value: values[index]!,
    direction: values[index]! > 0.1 ? 'positive' : values[index]! < -0.1 ? 'negative' : 'neutral',
  }));
  return {
    shot_id: shotId,
    xg: 0.1,
    log_odds: -2,
    baseline_log_odds: -2.1,
    quality_category: 'decent',
    contributions,
    salient: [],
  };
}

describe('contributionPlot', () => {
  it('draws one band per feature and one point per shot-feature pair', () => {
    const docs = [explanation('a', [0.5, -0.2, 0.0]), explanation('b', [-0.4, 0.3, 0.05])];
    const plot = contributionPlot(docs, 'a');
    expect(plot.points).toHaveLength(FEATURES.length * docs.length);
    expect(plot.svg.match(/class="band-line"/g)).toHaveLength(FEATURES.length);
  });

  it('single-shot match yields one highlighted point per band', () => {
    const plot = contributionPlot([explanation('only', [0.5, -0.2, 0.0])], 'only');
    const highlighted = plot.points.filter((p) => p.highlighted);
    expect(highlighted).toHaveLength(FEATURES.length);
    expect(new Set(highlighted.map((p) => p.feature_name)).size).toBe(FEATURES.length);
  });

  it('point x-positions are monotone in the contribution value', () => {
    const docs = [explanation('a', [0.5, -0.2, 0.0]), explanation('b', [-0.4, 0.3, 0.05])];
    const plot = contributionPlot(docs, null);
    const row = plot.points.filter((p) => p.feature_name === 'distance_to_goal');
    const sortedByValue = [...row].sort((p, q) => p.value - q.value).map((p) => p.cx);
    expect(sortedByValue).toEqual([...sortedByValue].sort((a, b) => a - b));
    expect(plot.xFor(0.5)).toBeGreaterThan(plot.xFor(0));
    expect(plot.xFor(-0.4)).toBeLessThan(plot.xFor(0));
  });

  it('zero line sits midway and the neutral band brackets it', () => {
    const plot = contributionPlot([explanation('a', [0.5, -0.2, 0.0])], 'a');
    const zero = plot.xFor(0);
    expect(plot.xFor(NEUTRAL_BAND) - zero).toBeCloseTo(zero - plot.xFor(-NEUTRAL_BAND), 9);
    expect(plot.svg).toContain('class="neutral-band"');
    expect(plot.svg).toContain('class="zero-line"');
  });

  it('all-neutral shot keeps every highlighted point inside the neutral band', () => {
    const docs = [explanation('n', [0.05, -0.03, 0.0]), explanation('other', [0.8, -0.6, 0.2])];
    const plot = contributionPlot(docs, 'n');
    for (const point of plot.points.filter((p) => p.highlighted)) {
      expect(point.cx).toBeGreaterThanOrEqual(plot.xFor(-NEUTRAL_BAND));
      expect(point.cx).toBeLessThanOrEqual(plot.xFor(NEUTRAL_BAND));
    }
  });

  it('point values are passed through verbatim from the documents', () => {
    const docs = [explanation('a', [0.512345, -0.2, 0.0])];
    const plot = contributionPlot(docs, 'a');
    const point = plot.points.find((p) => p.feature_name === 'distance_to_goal')!;
    expect(point.value).toBe(0.512345);
    expect(plot.svg).toContain('data-value="0.512345"');
  });

  it('handles an empty explanation list', () => {
    const plot = contributionPlot([], null);
    expect(plot.points).toEqual([]);
  });
});
