import { readFileSync } from 'node:fs';
import { describe, expect, it } from 'vitest';

import { BlockError, TestEditor } from '../src/editor.js';
import { BASE01_PALETTE, LOOP01_PALETTE, LOOP02_PALETTE } from './palettes.js';

const golden = (name: string) =>
  readFileSync(new URL(`./golden/${name}`, import.meta.url), 'utf8').trim();

describe('editor emits canonical bytes', () => {
  it('berries-match-rounds document equals the golden file', () => {
    const editor = new TestEditor(LOOP01_PALETTE);
    editor.add(editor.assertEquals(editor.attribute('redBerries'), editor.attribute('roundsCount')));
    expect(editor.toCanonical()).toBe(golden('test_berries_match_rounds.json'));
  });

  it('rounds-equal-four document equals the golden file', () => {
    const editor = new TestEditor(LOOP01_PALETTE);
    editor.add(editor.assertEquals(editor.attribute('roundsCount'), editor.count(4)));
    expect(editor.toCanonical()).toBe(golden('test_rounds_equal_four.json'));
  });

  it('shirt-branch document equals the golden file', () => {
    const editor = new TestEditor(LOOP02_PALETTE);
    editor.add(editor.branch(
      editor.attribute('shirt'), editor.color('shirt', 'blue'),
      [editor.assertEquals(editor.attribute('pinkBerries'), editor.attribute('roundsCount'))],
      [editor.assertEquals(editor.attribute('redBerries'), editor.attribute('roundsCount'))],
    ));
    expect(editor.toCanonical()).toBe(golden('test_shirt_branches.json'));
  });

  it('an empty editor is the empty test', () => {
    const editor = new TestEditor(LOOP01_PALETTE);
    expect(editor.toCanonical()).toBe('[]');
  });
});

describe('ill-typed documents are unconstructible', () => {
  it('rejects color vs count comparisons', () => {
    const editor = new TestEditor(LOOP02_PALETTE);
    expect(() =>
      editor.assertEquals(editor.attribute('shirt'), editor.attribute('redBerries')),
    ).toThrow(BlockError);
    expect(() =>
      editor.assertEquals(editor.attribute('redBerries'), editor.color('shirt', 'blue')),
    ).toThrow(BlockError);
  });

  it('rejects unknown attributes', () => {
    const editor = new TestEditor(LOOP01_PALETTE);
    expect(() => editor.attribute('hat')).toThrow(BlockError);
  });

  it('rejects colors outside the palette', () => {
    const editor = new TestEditor(LOOP02_PALETTE);
    expect(() => editor.color('shirt', 'purple')).toThrow(BlockError);
    expect(() => editor.color('redBerries', 'blue')).toThrow(BlockError);
  });

  it('rejects count literals outside the picker range', () => {
    const editor = new TestEditor(LOOP01_PALETTE);
    expect(() => editor.count(11)).toThrow(BlockError);
    expect(() => editor.count(-1)).toThrow(BlockError);
    expect(() => editor.count(2.5)).toThrow(BlockError);
  });

  it('base levels offer no if/else block', () => {
    const editor = new TestEditor(BASE01_PALETTE);
    expect(() =>
      editor.branch(editor.attribute('shirt'), editor.color('shirt', 'red')),
    ).toThrow(BlockError);
  });
});

describe('document editing', () => {
  it('counts blocks like the server (every node is a block)', () => {
    const editor = new TestEditor(LOOP01_PALETTE);
    editor.add(editor.assertEquals(editor.attribute('redBerries'), editor.attribute('roundsCount')));
    expect(editor.blockCount()).toBe(1);
    editor.add(editor.branch(
      editor.attribute('roundsCount'), editor.count(1),
      [editor.assertEquals(editor.attribute('redBerries'), editor.count(1))],
    ));
    expect(editor.blockCount()).toBe(3);
  });

  it('removal and clearing work by index', () => {
    const editor = new TestEditor(LOOP01_PALETTE);
    editor.add(editor.assertEquals(editor.attribute('redBerries'), editor.count(1)));
    editor.add(editor.assertEquals(editor.attribute('redBerries'), editor.count(2)));
    editor.removeAt(0);
    expect(editor.toAst()).toHaveLength(1);
    editor.clear();
    expect(editor.toCanonical()).toBe('[]');
  });
});
