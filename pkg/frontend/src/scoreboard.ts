/**
 * Scoreboard rendering of a server score breakdown.  The client never
 * computes points; it formats exactly what the API returned.
 */

import type { ScoreView } from './api.js';

export function scoreboardRows(score: ScoreView): string[][] {
  const rows = score.components.map((row) => [row.label, row.detail, String(row.points)]);
  rows.push(['Total', '', String(score.total)]);
  return rows;
}

export function renderScoreboard(score: ScoreView): string {
  const body = scoreboardRows(score)
    .map(([label, detail, points]) =>
      `<tr><td>${label}</td><td class="num">${detail}</td><td class="num">${points}</td></tr>`)
    .join('');
  const stars = '★'.repeat(score.stars) + '☆'.repeat(3 - score.stars);
  return `<table class="scoreboard"><tbody>${body}</tbody></table>` +
         `<p class="stars">${stars}</p>`;
}
