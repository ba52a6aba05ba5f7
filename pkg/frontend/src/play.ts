/**
 * One play-through of a level: session, tests, run, results.
 *
 * All outcomes come from the API; tampering with anything client-side
 * changes nothing the server stores.
 */

import type { GameApi, LevelView, RunResponse, TestsDocument } from './api.js';
import type { TestEditor } from './editor.js';

export class PlaySession {
  private sessionId: string | null = null;
  private response: RunResponse | null = null;

  constructor(
    private api: GameApi,
    private playerId: string,
    private level: LevelView,
  ) {}

  async start(seed?: number): Promise<void> {
    const session = await this.api.createSession(this.playerId, this.level.id, seed);
    this.sessionId = session.sessionId;
  }

  /** Submit a loop-level signpost test built in the editor. */
  async submitSignpostTest(editor: TestEditor, signpost = 0): Promise<void> {
    await this.submit({ signposts: [{ signpost, test: editor.toAst() }] });
  }

  /** Submit base-level portals: each carries an editor-built test. */
  async submitPortals(portals: { tile: [number, number]; editor: TestEditor }[]): Promise<void> {
    await this.submit({
      portals: portals.map(({ tile, editor }) => ({ tile, test: editor.toAst() })),
    });
  }

  async submit(tests: TestsDocument): Promise<void> {
    if (!this.sessionId) throw new Error('session not started');
    await this.api.putTests(this.sessionId, tests);
  }

  async run(): Promise<RunResponse> {
    if (!this.sessionId) throw new Error('session not started');
    this.response = await this.api.run(this.sessionId);
    return this.response;
  }

  /** Mutant programs and hints; only available once the run finished. */
  reveal(): RunResponse['mutantReveal'] {
    if (!this.response) throw new Error('the mutants stay hidden until the run finishes');
    return this.response.mutantReveal;
  }
}
