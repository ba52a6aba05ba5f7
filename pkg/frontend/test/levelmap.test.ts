import { describe, expect, it } from 'vitest';

import type { LevelSummary } from '../src/api.js';
import { levelCells, renderLevelMap, starGlyphs } from '../src/levelmap.js';

const summary = (overrides: Partial<LevelSummary>): LevelSummary => ({
  id: 'base-01',
  kind: 'base',
  title: 'The Great Evacuation',
  locked: false,
  stars: 0,
  bestTotal: null,
  attempts: 0,
  unlock: null,
  ...overrides,
});

describe('level map', () => {
  it('fresh players see loop tiles greyed out', () => {
    const cells = levelCells([
      summary({}),
      summary({ id: 'loop-01', kind: 'loop', locked: true }),
    ]);
    expect(cells[1]!.locked).toBe(true);
    const html = renderLevelMap([summary({ id: 'loop-01', kind: 'loop', locked: true })]);
    expect(html).toContain('locked');
    expect(html).not.toContain('<button');
  });

  it('an unlocked loop level gets a play button', () => {
    const html = renderLevelMap([
      summary({ id: 'loop-01', kind: 'loop', locked: false, bestTotal: 800, stars: 2 }),
    ]);
    expect(html).toContain('data-level="loop-01"');
    expect(html).toContain('<button');
    expect(html).toContain('★★☆');
  });

  it('a perfect score shows three stars', () => {
    expect(starGlyphs(3)).toBe('★★★');
    const html = renderLevelMap([summary({ stars: 3, bestTotal: 1000 })]);
    expect(html).toContain('★★★');
    expect(html).toContain('1000');
  });
});
