import { describe, expect, it } from 'vitest';

import { animationState, cursorForTick } from '../src/animation.js';
import type { TimelineEvent } from '../src/api.js';

const TIMELINE: TimelineEvent[] = [
  { tick: 0, critter: 0, kind: 'spawn', at: [1, 1], isMutant: false },
  { tick: 0, critter: 0, kind: 'attrChange', name: 'roundsCount', value: 1 },
  { tick: 1, critter: 0, kind: 'move', to: [2, 1] },
  { tick: 2, critter: 0, kind: 'move', to: [3, 1] },
  { tick: 2, critter: 0, kind: 'collect', berry: 'red', n: 1 },
  { tick: 3, critter: 0, kind: 'move', to: [4, 1] },
  { tick: 3, critter: 0, kind: 'testFail', site: 0, assertionPath: [0] },
  { tick: 4, critter: 0, kind: 'move', to: [5, 1] },
  { tick: 4, critter: 0, kind: 'exitCrossing', round: 1 },
  { tick: 8, critter: 1, kind: 'spawn', at: [1, 1], isMutant: true },
];

describe('animation frames are a pure fold over the timeline', () => {
  it('replays positions and cargo up to the cursor', () => {
    const frame = animationState(TIMELINE, 5);
    const sprite = frame.sprites.get(0)!;
    expect(sprite.position).toEqual([3, 1]);
    expect(sprite.carrying).toEqual({ red: 1 });
    expect(sprite.status).toBe('walking');
    expect(frame.finished).toBe(false);
  });

  it('sent-back critters change status at the crossing', () => {
    const frame = animationState(TIMELINE, TIMELINE.length);
    expect(frame.sprites.get(0)!.status).toBe('sentBack');
    expect(frame.sprites.get(1)!.isMutant).toBe(true);
    expect(frame.finished).toBe(true);
  });

  it('is deterministic for the same cursor', () => {
    const a = animationState(TIMELINE, 7);
    const b = animationState(TIMELINE, 7);
    expect(a).toEqual(b);
  });

  it('cursor zero shows an empty board', () => {
    const frame = animationState(TIMELINE, 0);
    expect(frame.sprites.size).toBe(0);
  });

  it('cursorForTick plays whole ticks', () => {
    expect(cursorForTick(TIMELINE, 0)).toBe(2);
    expect(cursorForTick(TIMELINE, 2)).toBe(5);
    expect(cursorForTick(TIMELINE, 99)).toBe(TIMELINE.length);
  });
});
