"""AST paths: addressing, navigation and structural edits.

A path is a tuple of child indices starting at the program root.  Child
slots per node kind:

* ``Eq`` / ``AssertEq``: 0 = lhs, 1 = rhs
* ``SetAttr``: 0 = value expression
* ``If``: 0 = condition, 1 = then-block, 2 = else-block
* ``Repeat``: 0 = body block
* ``CritterProgram``: 0 = init block, 1 = per-tile block
* ``Recipe``: 0 = the top-level repeat

Statement blocks are plain tuples; a path step into a block is the
statement index.  A test program's root is itself a block, so its paths
start with a statement index.
"""

from __future__ import annotations

import dataclasses
from typing import Iterator

from .nodes import (
    AssertEq,
    AttrRef,
    Collect,
    CritterProgram,
    Eq,
    If,
    Lit,
    Recipe,
    Repeat,
    SetAttr,
    TileIs,
)

Path = tuple[int, ...]


class BadPathError(Exception):
    """A path does not address an existing node or block slot."""


_LEAF = (Lit, AttrRef, TileIs, Collect)


def children(node) -> tuple:
    """Ordered child slots of a node (blocks appear as tuples)."""
    if isinstance(node, _LEAF):
        return ()
    if isinstance(node, (Eq, AssertEq)):
        return (node.lhs, node.rhs)
    if isinstance(node, SetAttr):
        return (node.value,)
    if isinstance(node, If):
        return (node.cond, node.then, node.orelse)
    if isinstance(node, Repeat):
        return (node.body,)
    if isinstance(node, CritterProgram):
        return (node.init, node.on_tile)
    if isinstance(node, Recipe):
        return (node.loop,)
    raise BadPathError(f"{type(node).__name__} has no children")


def _with_child(node, index: int, child):
    if isinstance(node, (Eq, AssertEq)):
        return dataclasses.replace(node, **{("lhs", "rhs")[index]: child})
    if isinstance(node, SetAttr) and index == 0:
        return dataclasses.replace(node, value=child)
    if isinstance(node, If):
        fields = ("cond", "then", "orelse")
        return dataclasses.replace(node, **{fields[index]: child})
    if isinstance(node, Repeat) and index == 0:
        return dataclasses.replace(node, body=child)
    if isinstance(node, CritterProgram):
        return dataclasses.replace(node, **{("init", "on_tile")[index]: child})
    if isinstance(node, Recipe) and index == 0:
        return dataclasses.replace(node, loop=child)
    raise BadPathError(f"cannot set child {index} of {type(node).__name__}")


def get_at(root, path: Path):
    """Node or block at ``path``; raises BadPathError when absent."""
    cur = root
    for step in path:
        slots = cur if isinstance(cur, tuple) else children(cur)
        if not isinstance(step, int) or step < 0 or step >= len(slots):
            raise BadPathError(f"no child {step} at {path}")
        cur = slots[step]
    return cur


def _rebuild(cur, path: Path, make):
    if not path:
        return make(cur)
    step = path[0]
    slots = cur if isinstance(cur, tuple) else children(cur)
    if not isinstance(step, int) or step < 0 or step >= len(slots):
        raise BadPathError(f"no child {step}")
    new_child = _rebuild(slots[step], path[1:], make)
    if isinstance(cur, tuple):
        return cur[:step] + (new_child,) + cur[step + 1:]
    return _with_child(cur, step, new_child)


def replace_at(root, path: Path, node):
    """New tree with the node at ``path`` replaced."""
    if not path:
        return node
    return _rebuild(root, path, lambda _old: node)


def delete_at(root, path: Path):
    """New tree with the statement at ``path`` removed from its block."""
    if not path:
        raise BadPathError("cannot delete the program root")
    parent = get_at(root, path[:-1])
    if not isinstance(parent, tuple):
        raise BadPathError("deletion target is not inside a statement block")
    index = path[-1]
    if not isinstance(index, int) or index < 0 or index >= len(parent):
        raise BadPathError(f"no statement {index} to delete")
    return _rebuild(root, path[:-1], lambda block: block[:index] + block[index + 1:])


def insert_at(root, path: Path, node):
    """New tree with ``node`` inserted at the block position ``path``."""
    if not path:
        raise BadPathError("cannot insert at the program root")
    parent = get_at(root, path[:-1])
    if not isinstance(parent, tuple):
        raise BadPathError("insertion target is not a statement block")
    index = path[-1]
    if not isinstance(index, int) or index < 0 or index > len(parent):
        raise BadPathError(f"cannot insert at position {index}")
    return _rebuild(root, path[:-1], lambda block: block[:index] + (node,) + block[index:])


def preorder(root, _path: Path = ()) -> Iterator[tuple[Path, object]]:
    """All (path, node) pairs in preorder.  Blocks themselves are skipped."""
    if isinstance(root, tuple):
        for i, item in enumerate(root):
            yield from preorder(item, _path + (i,))
        return
    yield _path, root
    for i, child in enumerate(children(root)):
        yield from preorder(child, _path + (i,))


def parent_block(root, path: Path) -> tuple | None:
    """The block holding the node at ``path``, or None if not in a block."""
    if not path:
        return None
    parent = get_at(root, path[:-1])
    return parent if isinstance(parent, tuple) else None
