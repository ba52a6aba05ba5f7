/**
 * The level overview: a grid of level tiles with stars and greyed locks.
 */

import type { LevelSummary } from './api.js';

export interface LevelCell {
  id: string;
  title: string;
  kind: 'base' | 'loop';
  locked: boolean;
  stars: string; // e.g. "★★☆"
  bestTotal: number | null;
}

export function starGlyphs(stars: number): string {
  return '★'.repeat(stars) + '☆'.repeat(3 - stars);
}

export function levelCells(levels: LevelSummary[]): LevelCell[] {
  return levels.map((level) => ({
    id: level.id,
    title: level.title,
    kind: level.kind,
    locked: level.locked,
    stars: starGlyphs(level.stars),
    bestTotal: level.bestTotal,
  }));
}

export function renderLevelMap(levels: LevelSummary[]): string {
  const cells = levelCells(levels).map((cell) => {
    const classes = ['level', cell.kind, cell.locked ? 'locked' : 'unlocked'].join(' ');
    const best = cell.bestTotal === null ? '' : `<span class="best">${cell.bestTotal}</span>`;
    const button = cell.locked
      ? `<span class="padlock">locked</span>`
      : `<button data-level="${cell.id}">play</button>`;
    return (
      `<div class="${classes}" data-level="${cell.id}">` +
      `<h3>${cell.title}</h3>` +
      `<span class="stars">${cell.stars}</span>${best}${button}</div>`
    );
  });
  return `<div class="level-map">${cells.join('')}</div>`;
}
