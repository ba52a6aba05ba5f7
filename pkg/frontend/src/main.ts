/**
 * Browser entry: level map, board canvas, block editor, run + replay.
 */

import { GameApi, type LevelSummary, type LevelView, type RunResponse } from './api.js';
import { animationState, cursorForTick } from './animation.js';
import { TestEditor, type EditorBlock } from './editor.js';
import { renderLevelMap } from './levelmap.js';
import { renderScoreboard } from './scoreboard.js';
import { PlaySession } from './play.js';

const API_BASE =
  new URLSearchParams(location.search).get('api') ?? 'http://127.0.0.1:8000';
const api = new GameApi(API_BASE);

const TERRAIN_COLORS: Record<string, string> = {
  g: '#7ec850',
  d: '#b08968',
  i: '#bfe6f2',
  w: '#4a90d9',
  o: '#5b4632',
};

const app = document.getElementById('app')!;
let playerId = localStorage.getItem('critters-player') ?? '';

async function ensurePlayer(): Promise<string> {
  if (playerId) return playerId;
  const name = `player-${Math.random().toString(36).slice(2, 8)}`;
  const created = await api.createPlayer(name);
  playerId = created.playerId;
  localStorage.setItem('critters-player', playerId);
  return playerId;
}

async function showLevelMap(): Promise<void> {
  const player = await ensurePlayer();
  const levels = await api.listLevels(player);
  app.innerHTML = `<h1>Critters</h1>${renderLevelMap(levels)}`;
  for (const button of app.querySelectorAll<HTMLButtonElement>('button[data-level]')) {
    button.addEventListener('click', () => {
      void showLevel(button.dataset.level!, levels);
    });
  }
}

function drawBoard(canvas: HTMLCanvasElement, level: LevelView,
                   sprites?: ReturnType<typeof animationState>['sprites']): void {
  const board = level.board;
  const cell = Math.floor(Math.min(480 / board.width, 480 / board.height));
  canvas.width = board.width * cell;
  canvas.height = board.height * cell;
  const ctx = canvas.getContext('2d')!;
  board.tiles.forEach((row, y) => {
    [...row].forEach((code, x) => {
      ctx.fillStyle = TERRAIN_COLORS[code] ?? '#000';
      ctx.fillRect(x * cell, y * cell, cell, cell);
      ctx.strokeStyle = 'rgba(0,0,0,0.08)';
      ctx.strokeRect(x * cell, y * cell, cell, cell);
    });
  });
  const mark = (pos: [number, number] | undefined, glyph: string) => {
    if (!pos) return;
    ctx.font = `${cell * 0.8}px serif`;
    ctx.textAlign = 'center';
    ctx.textBaseline = 'middle';
    ctx.fillText(glyph, (pos[0] + 0.5) * cell, (pos[1] + 0.5) * cell);
  };
  mark(level.board.landmarks.village, '🏠');
  mark(level.board.landmarks.tower, '🗼');
  mark(level.board.landmarks.basket, '🧺');
  mark(level.board.landmarks.crossing, '↩');
  for (const bush of level.board.landmarks.bushes ?? []) {
    mark(bush.pos, bush.kind === 'pink' ? '🌸' : '🍓');
  }
  for (const signpost of level.board.landmarks.signposts ?? []) {
    mark(signpost, '🪧');
  }
  if (sprites) {
    for (const sprite of sprites.values()) {
      if (sprite.status === 'teleported' || sprite.status === 'sentBack') continue;
      const [x, y] = sprite.position;
      ctx.fillStyle = sprite.isMutant ? '#3faa34' : '#f2a33c';
      ctx.beginPath();
      ctx.arc((x + 0.5) * cell, (y + 0.5) * cell, cell * 0.3, 0, Math.PI * 2);
      ctx.fill();
    }
  }
}

interface EditorUi {
  editor: TestEditor;
  refresh: () => void;
}

function operandText(op: { kind: string; name?: string; value?: string | number }): string {
  return op.kind === 'attr' ? op.name! : String(op.value);
}

function attrOptions(level: LevelView): string {
  return Object.keys(level.palette.attributes)
    .map((name) => `<option value="${name}">${name}</option>`)
    .join('');
}

function buildEditorPanel(panel: HTMLElement, level: LevelView): EditorUi {
  const editor = new TestEditor(level.palette);
  const withIf = level.palette.blocks.includes('if');
  panel.innerHTML = `
    <h3>Signpost test</h3>
    <div class="adder">
      <select class="lhs">${attrOptions(level)}</select>
      =
      <select class="rhs"></select>
      <button class="add-assert">assert</button>
      ${withIf ? '<button class="add-if">wrap last in if</button>' : ''}
      <button class="clear">clear</button>
    </div>
    <ol class="blocks"></ol>`;
  const lhsSelect = panel.querySelector<HTMLSelectElement>('.lhs')!;
  const rhsSelect = panel.querySelector<HTMLSelectElement>('.rhs')!;
  const list = panel.querySelector<HTMLOListElement>('.blocks')!;

  const rhsChoices = () => {
    const attr = level.palette.attributes[lhsSelect.value]!;
    const options: string[] = [];
    for (const [name, other] of Object.entries(level.palette.attributes)) {
      if (name !== lhsSelect.value && other.type === attr.type) {
        options.push(`<option value="attr:${name}">${name}</option>`);
      }
    }
    if (attr.type === 'color') {
      for (const color of attr.palette ?? []) {
        options.push(`<option value="color:${color}">${color}</option>`);
      }
    } else {
      const { min, max } = level.palette.countLiterals;
      for (let n = min; n <= max; n++) {
        options.push(`<option value="count:${n}">${n}</option>`);
      }
    }
    rhsSelect.innerHTML = options.join('');
  };
  lhsSelect.addEventListener('change', rhsChoices);
  rhsChoices();

  const describe = (block: EditorBlock): string => {
    if (block.kind === 'assert') {
      return `only critters with ${operandText(block.lhs)} = ${operandText(block.rhs)} can pass`;
    }
    return `if ${operandText(block.condLhs)} = ${operandText(block.condRhs)} ` +
           `then [${block.then.map(describe).join('; ')}] else [${block.orelse.map(describe).join('; ')}]`;
  };

  const refresh = () => {
    list.innerHTML = editor
      .document()
      .map((block, i) => `<li>${describe(block)} <button data-rm="${i}">x</button></li>`)
      .join('');
    for (const rm of list.querySelectorAll<HTMLButtonElement>('button[data-rm]')) {
      rm.addEventListener('click', () => {
        editor.removeAt(Number(rm.dataset.rm));
        refresh();
      });
    }
  };

  const pickRhs = () => {
    const [kind, value] = rhsSelect.value.split(':', 2) as [string, string];
    if (kind === 'attr') return editor.attribute(value);
    if (kind === 'color') return editor.color(lhsSelect.value, value);
    return editor.count(Number(value));
  };

  panel.querySelector('.add-assert')!.addEventListener('click', () => {
    editor.add(editor.assertEquals(editor.attribute(lhsSelect.value), pickRhs()));
    refresh();
  });
  panel.querySelector('.add-if')?.addEventListener('click', () => {
    const doc = editor.document();
    if (!doc.length) return;
    const last = doc[doc.length - 1]!;
    editor.removeAt(doc.length - 1);
    editor.add(editor.branch(editor.attribute(lhsSelect.value), pickRhs(), [last], []));
    refresh();
  });
  panel.querySelector('.clear')!.addEventListener('click', () => {
    editor.clear();
    refresh();
  });
  return { editor, refresh };
}

function animate(canvas: HTMLCanvasElement, level: LevelView, response: RunResponse,
                 onDone: () => void): void {
  let tick = 0;
  const lastTick = response.timeline.length
    ? response.timeline[response.timeline.length - 1]!.tick
    : 0;
  const step = () => {
    const frame = animationState(response.timeline, cursorForTick(response.timeline, tick));
    drawBoard(canvas, level, frame.sprites);
    if (tick++ <= lastTick) {
      setTimeout(() => requestAnimationFrame(step), 90);
    } else {
      onDone();
    }
  };
  requestAnimationFrame(step);
}

async function showLevel(levelId: string, summaries: LevelSummary[]): Promise<void> {
  const player = await ensurePlayer();
  const level = await api.getLevel(levelId, player);
  const summary = summaries.find((s) => s.id === levelId);
  app.innerHTML = `
    <a href="#" class="back">← levels</a>
    <h2>${level.title} <small>${summary?.stars ?? 0}★</small></h2>
    <p class="flavor">${level.flavor}</p>
    <div class="columns">
      <div><canvas id="board"></canvas></div>
      <div>
        <h3>Healthy behavior</h3>
        <pre class="program">${JSON.stringify(level.program, null, 1)}</pre>
        <div id="editor"></div>
        <button id="run" class="primary">start the game</button>
      </div>
    </div>
    <div id="results"></div>`;
  app.querySelector('.back')!.addEventListener('click', (event) => {
    event.preventDefault();
    void showLevelMap();
  });

  const canvas = document.getElementById('board') as HTMLCanvasElement;
  drawBoard(canvas, level);
  const { editor } = buildEditorPanel(document.getElementById('editor')!, level);

  document.getElementById('run')!.addEventListener('click', async () => {
    const results = document.getElementById('results')!;
    results.innerHTML = '<p>running…</p>';
    try {
      const session = new PlaySession(api, player, level);
      await session.start();
      if (level.kind === 'loop') {
        await session.submitSignpostTest(editor);
      } else {
        // base levels: every test goes into one portal on the first path tile
        const tile = level.board.path[1]!;
        await session.submit({ portals: [{ tile, test: editor.toAst() }] });
      }
      const response = await session.run();
      animate(canvas, level, response, () => {
        const reveal = response.mutantReveal
          .map((entry) =>
            `<li><strong>${entry.id}</strong> (${entry.critters.length} critter) ` +
            `— ${entry.displayHint}</li>`)
          .join('');
        results.innerHTML =
          renderScoreboard(response.score) +
          `<h3>The smudged recipes, revealed</h3><ul class="reveal">${reveal}</ul>`;
      });
    } catch (error) {
      results.innerHTML = `<p class="error">${String(error)}</p>`;
    }
  });
}

void showLevelMap();
