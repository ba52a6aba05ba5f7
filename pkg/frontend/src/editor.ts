/**
 * Block editor model: a tree of blocks isomorphic to the server's test AST.
 *
 * Every constructor checks the level palette, so ill-typed block
 * combinations cannot be built at all; whatever the editor holds always
 * passes the server-side typecheck.
 */

import { canonicalJson, type OperandNode, type TestNode } from './ast.js';
import type { LevelPalette } from './api.js';

export class BlockError extends Error {}

export type Operand = OperandNode;

export interface AssertBlock {
  kind: 'assert';
  lhs: Operand;
  rhs: Operand;
}

export interface BranchBlock {
  kind: 'branch';
  condLhs: Operand;
  condRhs: Operand;
  then: EditorBlock[];
  orelse: EditorBlock[];
}

export type EditorBlock = AssertBlock | BranchBlock;

export class TestEditor {
  private blocks: EditorBlock[] = [];

  constructor(private palette: LevelPalette) {}

  // -- operand pickers ------------------------------------------------------

  attribute(name: string): Operand {
    if (!(name in this.palette.attributes)) {
      throw new BlockError(`no attribute picker for ${name}`);
    }
    return { kind: 'attr', name };
  }

  /** A color literal; only colors from the attribute's palette exist. */
  color(attrName: string, value: string): Operand {
    const attr = this.palette.attributes[attrName];
    if (!attr || attr.type !== 'color' || !attr.palette?.includes(value)) {
      throw new BlockError(`${value} is not a ${attrName} color`);
    }
    return { kind: 'colorLit', value };
  }

  count(value: number): Operand {
    const { min, max } = this.palette.countLiterals;
    if (!Number.isInteger(value) || value < min || value > max) {
      throw new BlockError(`count literal must be an integer in ${min}..${max}`);
    }
    return { kind: 'countLit', value };
  }

  private operandType(op: Operand): 'color' | 'count' {
    if (op.kind === 'colorLit') return 'color';
    if (op.kind === 'countLit') return 'count';
    const attr = this.palette.attributes[op.name];
    if (!attr) throw new BlockError(`unknown attribute ${op.name}`);
    return attr.type;
  }

  private checkComparable(lhs: Operand, rhs: Operand): void {
    const left = this.operandType(lhs);
    const right = this.operandType(rhs);
    if (left !== right) {
      throw new BlockError(`cannot compare ${left} with ${right}`);
    }
  }

  // -- block constructors ---------------------------------------------------

  assertEquals(lhs: Operand, rhs: Operand): AssertBlock {
    if (!this.palette.blocks.includes('assertEq')) {
      throw new BlockError('this level has no assertion block');
    }
    this.checkComparable(lhs, rhs);
    return { kind: 'assert', lhs, rhs };
  }

  branch(condLhs: Operand, condRhs: Operand,
         then: EditorBlock[] = [], orelse: EditorBlock[] = []): BranchBlock {
    if (!this.palette.blocks.includes('if')) {
      throw new BlockError('this level has no if/else block');
    }
    this.checkComparable(condLhs, condRhs);
    return { kind: 'branch', condLhs, condRhs, then: [...then], orelse: [...orelse] };
  }

  // -- document -------------------------------------------------------------

  add(block: EditorBlock): void {
    this.blocks.push(block);
  }

  removeAt(index: number): void {
    this.blocks.splice(index, 1);
  }

  clear(): void {
    this.blocks = [];
  }

  document(): readonly EditorBlock[] {
    return this.blocks;
  }

  blockCount(): number {
    const count = (blocks: EditorBlock[]): number =>
      blocks.reduce(
        (sum, block) =>
          sum + (block.kind === 'assert' ? 1 : 1 + count(block.then) + count(block.orelse)),
        0,
      );
    return count(this.blocks);
  }

  toAst(): TestNode[] {
    return this.blocks.map(blockToNode);
  }

  /** Canonical bytes, identical to the server's emission of the same test. */
  toCanonical(): string {
    return canonicalJson(this.toAst());
  }
}

function blockToNode(block: EditorBlock): TestNode {
  if (block.kind === 'assert') {
    return { kind: 'assertEq', lhs: block.lhs, rhs: block.rhs };
  }
  return {
    kind: 'if',
    cond: { kind: 'eq', lhs: block.condLhs, rhs: block.condRhs },
    then: block.then.map(blockToNode),
    else: block.orelse.map(blockToNode),
  };
}
