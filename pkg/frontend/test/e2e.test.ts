/**
 * End-to-end flow against the real Python server: unlock a loop level by
 * beating its base level, author the signpost test block by block, run,
 * and read the scoreboard and mutant reveal from live API data.
 */

import { spawn, type ChildProcess } from 'node:child_process';
import { mkdtempSync } from 'node:fs';
import { tmpdir } from 'node:os';
import { join } from 'node:path';
import { readFileSync } from 'node:fs';
import { afterAll, beforeAll, describe, expect, it } from 'vitest';

import { GameApi } from '../src/api.js';
import { TestEditor } from '../src/editor.js';
import { PlaySession } from '../src/play.js';
import { scoreboardRows } from '../src/scoreboard.js';

const PORT = 8900 + Math.floor(Math.random() * 100);
const BASE = `http://127.0.0.1:${PORT}`;

let server: ChildProcess;

beforeAll(async () => {
  const dataDir = mkdtempSync(join(tmpdir(), 'critters-e2e-'));
  server = spawn('python3', [
    '-m', 'critters.cli', 'serve', '--port', String(PORT), '--data', dataDir,
  ], { stdio: 'ignore' });
  const deadline = Date.now() + 30_000;
  for (;;) {
    try {
      const response = await fetch(`${BASE}/api/levels`);
      if (response.ok) return;
    } catch {
      // not up yet
    }
    if (Date.now() > deadline) throw new Error('game server did not come up');
    await new Promise((resolve) => setTimeout(resolve, 250));
  }
});

afterAll(() => {
  server?.kill();
});

describe('full play flow over the live API', () => {
  const api = new GameApi(BASE);

  it('plays base-01 to unlock loop-01, then reproduces the loop scoreboard', async () => {
    const { playerId } = await api.createPlayer('e2e');

    // fresh player: loops are greyed out
    let levels = await api.listLevels(playerId);
    expect(levels.find((l) => l.id === 'loop-01')!.locked).toBe(true);

    // base-01: two single-assertion portals built in the editor
    const base = await api.getLevel('base-01', playerId);
    expect(base.palette.blocks).toEqual(['assertEq']);
    const baseEditor = new TestEditor(base.palette);
    const redCheck = baseEditor.assertEquals(
      baseEditor.attribute('shirt'), baseEditor.color('shirt', 'red'));
    const orangeCheck = baseEditor.assertEquals(
      baseEditor.attribute('shirt'), baseEditor.color('shirt', 'orange'));

    const baseSession = new PlaySession(api, playerId, base);
    await baseSession.start(5);
    await baseSession.submit({
      portals: [
        { tile: [5, 13], test: [{ kind: 'assertEq', lhs: redCheck.lhs, rhs: redCheck.rhs }] },
        { tile: [9, 7], test: [{ kind: 'assertEq', lhs: orangeCheck.lhs, rhs: orangeCheck.rhs }] },
      ],
    });
    const baseRun = await baseSession.run();
    expect(baseRun.score.total).toBe(1100);

    // the loop level is open now
    levels = await api.listLevels(playerId);
    expect(levels.find((l) => l.id === 'loop-01')!.locked).toBe(false);
    expect(levels.find((l) => l.id === 'base-01')!.stars).toBe(3);

    // the public view shows the healthy recipe but no mutant material:
    // no catalog key, only the roster's mutant head count
    const loop = await api.getLevel('loop-01', playerId);
    const viewText = JSON.stringify(loop);
    expect('mutants' in loop).toBe(false);
    expect(viewText).not.toContain('"edits"');
    expect(viewText).not.toContain('displayHint');
    expect(loop.roster).toEqual({ healthy: 6, mutants: 4, spawnInterval: 8 });

    // compose the signpost test; its bytes equal the golden canonical file
    const editor = new TestEditor(loop.palette);
    editor.add(editor.assertEquals(
      editor.attribute('redBerries'), editor.attribute('roundsCount')));
    const golden = readFileSync(
      new URL('./golden/test_berries_match_rounds.json', import.meta.url), 'utf8').trim();
    expect(editor.toCanonical()).toBe(golden);

    const session = new PlaySession(api, playerId, loop);
    await session.start(7);
    await session.submitSignpostTest(editor);
    const run = await session.run();

    // the loop scoreboard, straight from live API data
    expect(scoreboardRows(run.score)).toEqual([
      ['Successful collectors', '100 %', '400'],
      ['Detected wrong collectors', '100 %', '600'],
      ['Penalty for late detection', '', '0'],
      ['Total', '', '1000'],
    ]);
    expect(run.score.stars).toBe(3);

    // the timeline drives animation; mutant flags only live there
    const spawnEvents = run.timeline.filter((e) => e.kind === 'spawn');
    expect(spawnEvents).toHaveLength(10);
    expect(spawnEvents.filter((e) => e.isMutant)).toHaveLength(4);

    // the reveal arrives only with the finished run
    const reveal = session.reveal();
    expect(reveal.map((m) => m.id).sort()).toEqual([
      'empty-handed', 'final-round-slacker', 'greedy-picker', 'second-round-double',
    ]);
    for (const entry of reveal) {
      expect(entry.displayHint.length).toBeGreaterThan(0);
      expect(viewText).not.toContain(entry.displayHint);
    }
  });

  it('the server rejects out-of-phase and ill-placed submissions', async () => {
    const { playerId } = await api.createPlayer('e2e-errors');
    const base = await api.getLevel('base-01', playerId);
    const session = new PlaySession(api, playerId, base);
    await session.start(1);
    // a portal in the lake is refused with diagnostics
    await expect(session.submit({
      portals: [{
        tile: [12, 9],
        test: [{ kind: 'assertEq', lhs: { kind: 'attr', name: 'shirt' },
                 rhs: { kind: 'colorLit', value: 'red' } }],
      }],
    })).rejects.toMatchObject({ status: 422 });
    await session.run();
    // after the run, tests are frozen
    await expect(session.submit({ portals: [] })).rejects.toMatchObject({ status: 409 });
  });
});
