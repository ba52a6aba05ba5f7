"""Canonical JSON form of the block-language AST.

Every node is an object with a ``kind`` discriminator.  Canonical emission
sorts keys alphabetically and uses no insignificant whitespace, so equal
trees always serialize to equal bytes.  A test program is a JSON array of
statement nodes.
"""

from __future__ import annotations

import json

from .errors import AstSchemaError, AstSyntaxError
from .nodes import (
    AssertEq,
    AttrRef,
    Collect,
    Color,
    Count,
    CritterProgram,
    Eq,
    If,
    Lit,
    Recipe,
    Repeat,
    SetAttr,
    Terrain,
    TileIs,
)


def to_jsonable(node):
    """Plain-data form of a node or statement block."""
    if isinstance(node, tuple):
        return [to_jsonable(stmt) for stmt in node]
    if isinstance(node, Lit):
        if isinstance(node.value, Color):
            return {"kind": "colorLit", "value": node.value.name}
        return {"kind": "countLit", "value": node.value.n}
    if isinstance(node, AttrRef):
        return {"kind": "attr", "name": node.name}
    if isinstance(node, TileIs):
        return {"kind": "tileIs", "terrain": node.terrain.value}
    if isinstance(node, Eq):
        return {"kind": "eq", "lhs": to_jsonable(node.lhs), "rhs": to_jsonable(node.rhs)}
    if isinstance(node, AssertEq):
        return {"kind": "assertEq", "lhs": to_jsonable(node.lhs), "rhs": to_jsonable(node.rhs)}
    if isinstance(node, SetAttr):
        return {"kind": "setAttr", "name": node.name, "value": to_jsonable(node.value)}
    if isinstance(node, Collect):
        return {"kind": "collect", "berry": node.kind, "count": node.count}
    if isinstance(node, If):
        return {
            "kind": "if",
            "cond": to_jsonable(node.cond),
            "then": to_jsonable(node.then),
            "else": to_jsonable(node.orelse),
        }
    if isinstance(node, Repeat):
        return {"kind": "repeat", "times": node.times, "body": to_jsonable(node.body)}
    if isinstance(node, CritterProgram):
        return {
            "kind": "cut",
            "init": to_jsonable(node.init),
            "onTile": to_jsonable(node.on_tile),
        }
    if isinstance(node, Recipe):
        return {"kind": "recipe", "loop": to_jsonable(node.loop)}
    raise AstSchemaError(f"cannot serialize {type(node).__name__}")


def _expect_keys(obj: dict, keys: set[str]):
    got = set(obj)
    if got != keys:
        raise AstSchemaError(
            f"node {obj.get('kind', '?')!r} has keys {sorted(got)}, expected {sorted(keys)}"
        )


def _expect_str(obj, key):
    value = obj[key]
    if not isinstance(value, str):
        raise AstSchemaError(f"field {key!r} must be a string")
    return value


def _expect_int(obj, key):
    value = obj[key]
    if not isinstance(value, int) or isinstance(value, bool):
        raise AstSchemaError(f"field {key!r} must be an integer")
    return value


def _block(obj) -> tuple:
    if not isinstance(obj, list):
        raise AstSchemaError("statement block must be a JSON array")
    return tuple(from_jsonable(item) for item in obj)


def from_jsonable(obj):
    """Rebuild a node (or statement block, from a JSON array)."""
    if isinstance(obj, list):
        return _block(obj)
    if not isinstance(obj, dict):
        raise AstSchemaError(f"node must be an object, got {type(obj).__name__}")
    kind = obj.get("kind")
    try:
        if kind == "colorLit":
            _expect_keys(obj, {"kind", "value"})
            return Lit(Color(_expect_str(obj, "value")))
        if kind == "countLit":
            _expect_keys(obj, {"kind", "value"})
            return Lit(Count(_expect_int(obj, "value")))
        if kind == "attr":
            _expect_keys(obj, {"kind", "name"})
            return AttrRef(_expect_str(obj, "name"))
        if kind == "tileIs":
            _expect_keys(obj, {"kind", "terrain"})
            name = _expect_str(obj, "terrain")
            try:
                return TileIs(Terrain(name))
            except ValueError:
                raise AstSchemaError(f"unknown terrain {name!r}") from None
        if kind == "eq":
            _expect_keys(obj, {"kind", "lhs", "rhs"})
            return Eq(from_jsonable(obj["lhs"]), from_jsonable(obj["rhs"]))
        if kind == "assertEq":
            _expect_keys(obj, {"kind", "lhs", "rhs"})
            return AssertEq(from_jsonable(obj["lhs"]), from_jsonable(obj["rhs"]))
        if kind == "setAttr":
            _expect_keys(obj, {"kind", "name", "value"})
            return SetAttr(_expect_str(obj, "name"), from_jsonable(obj["value"]))
        if kind == "collect":
            _expect_keys(obj, {"kind", "berry", "count"})
            return Collect(_expect_str(obj, "berry"), _expect_int(obj, "count"))
        if kind == "if":
            _expect_keys(obj, {"kind", "cond", "then", "else"})
            return If(from_jsonable(obj["cond"]), _block(obj["then"]), _block(obj["else"]))
        if kind == "repeat":
            _expect_keys(obj, {"kind", "times", "body"})
            return Repeat(_expect_int(obj, "times"), _block(obj["body"]))
        if kind == "cut":
            _expect_keys(obj, {"kind", "init", "onTile"})
            return CritterProgram(_block(obj["init"]), _block(obj["onTile"]))
        if kind == "recipe":
            _expect_keys(obj, {"kind", "loop"})
            loop = from_jsonable(obj["loop"])
            if not isinstance(loop, Repeat):
                raise AstSchemaError("recipe loop must be a repeat node")
            return Recipe(loop)
    except ValueError as exc:
        raise AstSchemaError(str(exc)) from None
    raise AstSchemaError(f"unknown node kind {kind!r}")


def canonical_json(jsonable) -> str:
    """Canonical rendering of plain data: sorted keys, no extra whitespace."""
    return json.dumps(jsonable, sort_keys=True, separators=(",", ":"))


def emit_ast(node) -> str:
    """Canonical text of a node or test program."""
    return canonical_json(to_jsonable(node))


def parse_ast(text: str):
    """Parse canonical (or any equivalent) AST JSON into nodes."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise AstSyntaxError(str(exc), pos=exc.pos) from None
    return from_jsonable(data)
