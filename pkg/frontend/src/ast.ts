/**
 * Wire-format AST nodes for block tests, plus the canonical serializer.
 *
 * Canonical text must match the server byte for byte: keys sorted, no
 * insignificant whitespace.
 */

export type OperandNode =
  | { kind: 'attr'; name: string }
  | { kind: 'colorLit'; value: string }
  | { kind: 'countLit'; value: number };

export type ConditionNode = { kind: 'eq'; lhs: OperandNode; rhs: OperandNode };

export type TestNode =
  | { kind: 'assertEq'; lhs: OperandNode; rhs: OperandNode }
  | { kind: 'if'; cond: ConditionNode; then: TestNode[]; else: TestNode[] };

/** Key-sorted, whitespace-free JSON; the server's canonical emission. */
export function canonicalJson(value: unknown): string {
  if (value === null || typeof value !== 'object') {
    return JSON.stringify(value);
  }
  if (Array.isArray(value)) {
    return '[' + value.map(canonicalJson).join(',') + ']';
  }
  const record = value as Record<string, unknown>;
  const parts = Object.keys(record)
    .sort()
    .map((key) => JSON.stringify(key) + ':' + canonicalJson(record[key]));
  return '{' + parts.join(',') + '}';
}
