/**
 * Animation state: a pure fold over the event timeline.
 *
 * The cursor says how many events have played; everything on screen is a
 * function of (timeline, cursor).  No game logic is recomputed here.
 */

import type { TimelineEvent } from './api.js';

export type SpriteStatus = 'walking' | 'safe' | 'teleported' | 'sentBack' | 'done';

export interface Sprite {
  position: [number, number];
  isMutant: boolean;
  status: SpriteStatus;
  carrying: Record<string, number>;
  attrs: Record<string, string | number>;
}

export interface AnimationFrame {
  sprites: Map<number, Sprite>;
  tick: number;
  finished: boolean;
}

export function animationState(timeline: TimelineEvent[], cursor: number): AnimationFrame {
  const sprites = new Map<number, Sprite>();
  let tick = 0;
  const upto = Math.max(0, Math.min(cursor, timeline.length));
  for (let i = 0; i < upto; i++) {
    const event = timeline[i]!;
    tick = event.tick;
    switch (event.kind) {
      case 'spawn':
        sprites.set(event.critter, {
          position: event.at as [number, number],
          isMutant: Boolean(event.isMutant),
          status: 'walking',
          carrying: {},
          attrs: {},
        });
        break;
      case 'move': {
        const sprite = sprites.get(event.critter);
        if (sprite) sprite.position = event.to as [number, number];
        break;
      }
      case 'attrChange': {
        const sprite = sprites.get(event.critter);
        if (sprite) sprite.attrs[event.name as string] = event.value as string | number;
        break;
      }
      case 'collect': {
        const sprite = sprites.get(event.critter);
        if (sprite) {
          const berry = event.berry as string;
          sprite.carrying[berry] = (sprite.carrying[berry] ?? 0) + (event.n as number);
        }
        break;
      }
      case 'teleport': {
        const sprite = sprites.get(event.critter);
        if (sprite) sprite.status = 'teleported';
        break;
      }
      case 'exitCrossing': {
        const sprite = sprites.get(event.critter);
        if (sprite) sprite.status = 'sentBack';
        break;
      }
      case 'reachTower': {
        const sprite = sprites.get(event.critter);
        if (sprite) sprite.status = 'safe';
        break;
      }
      case 'deposit': {
        const sprite = sprites.get(event.critter);
        if (sprite) sprite.status = 'done';
        break;
      }
      default:
        break; // testPass/testFail only matter to the effects layer
    }
  }
  return { sprites, tick, finished: upto >= timeline.length };
}

/** Index of the first event after the given tick; drives tick-at-a-time playback. */
export function cursorForTick(timeline: TimelineEvent[], tick: number): number {
  let cursor = 0;
  while (cursor < timeline.length && timeline[cursor]!.tick <= tick) cursor++;
  return cursor;
}
