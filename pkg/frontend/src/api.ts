/**
 * Thin typed client for the game API.  The server owns all game truth;
 * this module only moves JSON.
 */

import type { TestNode } from './ast.js';

export interface LevelSummary {
  id: string;
  kind: 'base' | 'loop';
  title: string;
  locked: boolean;
  stars: number;
  bestTotal: number | null;
  attempts: number;
  unlock: { requiresLevel: string; minPoints: number } | null;
}

export interface PaletteAttribute {
  type: 'color' | 'count';
  palette?: string[];
  role?: string;
}

export interface LevelPalette {
  blocks: string[];
  attributes: Record<string, PaletteAttribute>;
  countLiterals: { min: number; max: number };
  tileCheck: boolean;
}

export interface BoardView {
  width: number;
  height: number;
  tiles: string[];
  path: [number, number][];
  landmarks: {
    village?: [number, number];
    tower?: [number, number];
    basket?: [number, number];
    crossing?: [number, number];
    bushes?: { pos: [number, number]; kind: string }[];
    signposts?: [number, number][];
  };
}

export interface LevelView {
  id: string;
  kind: 'base' | 'loop';
  title: string;
  flavor: string;
  board: BoardView;
  program: unknown;
  palette: LevelPalette;
  roster: { healthy: number; mutants: number; spawnInterval: number };
}

export interface TimelineEvent {
  tick: number;
  critter: number;
  kind: string;
  [extra: string]: unknown;
}

export interface ScoreRow {
  label: string;
  detail: string;
  points: number;
}

export interface ScoreView {
  components: ScoreRow[];
  total: number;
  stars: number;
}

export interface MutantRevealEntry {
  id: string;
  displayHint: string;
  edits: unknown[];
  program: unknown;
  critters: number[];
}

export interface RunResponse {
  result: { outcomes: unknown[]; detected: number; [extra: string]: unknown };
  score: ScoreView;
  timeline: TimelineEvent[];
  mutantReveal: MutantRevealEntry[];
  seed: number;
  setupSeconds: number;
}

export type TestsDocument =
  | { portals: { tile: [number, number]; test: TestNode[] }[] }
  | { signposts: { signpost: number; test: TestNode[] }[] };

export class ApiError extends Error {
  constructor(public status: number, public body: unknown) {
    super(`API error ${status}`);
  }
}

export class GameApi {
  constructor(private base: string) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const response = await fetch(this.base + path, {
      method,
      headers: body === undefined ? {} : { 'content-type': 'application/json' },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const payload = await response.json().catch(() => null);
    if (!response.ok) {
      throw new ApiError(response.status, payload);
    }
    return payload as T;
  }

  createPlayer(displayName: string): Promise<{ playerId: string; displayName: string }> {
    return this.request('POST', '/api/players', { displayName });
  }

  listLevels(player?: string): Promise<LevelSummary[]> {
    const query = player ? `?player=${encodeURIComponent(player)}` : '';
    return this.request('GET', `/api/levels${query}`);
  }

  getLevel(id: string, player?: string): Promise<LevelView> {
    const query = player ? `?player=${encodeURIComponent(player)}` : '';
    return this.request('GET', `/api/levels/${id}${query}`);
  }

  createSession(player: string, level: string, seed?: number):
      Promise<{ sessionId: string; seed: number }> {
    const body: Record<string, unknown> = { player, level };
    if (seed !== undefined) body.seed = seed;
    return this.request('POST', '/api/sessions', body);
  }

  putTests(sessionId: string, tests: TestsDocument): Promise<{ ok: boolean; blocks: number }> {
    return this.request('PUT', `/api/sessions/${sessionId}/tests`, tests);
  }

  run(sessionId: string): Promise<RunResponse> {
    return this.request('POST', `/api/sessions/${sessionId}/run`);
  }

  progress(player: string): Promise<{ playerId: string; levels: Record<string, unknown> }> {
    return this.request('GET', `/api/players/${player}/progress`);
  }
}
