"""Static checks for behavior and test programs.

A program with an empty diagnostic list is guaranteed not to raise
TypeMismatchError or UnknownAttributeError when evaluated against any
state conforming to the same schema.
"""

from __future__ import annotations

from dataclasses import dataclass

from .nodes import (
    AssertEq,
    AttrRef,
    AttributeSchema,
    Collect,
    Color,
    CritterProgram,
    Eq,
    If,
    Lit,
    Recipe,
    Repeat,
    ROUNDS_ATTR,
    SetAttr,
    TileIs,
    berry_counter_name,
)
from .paths import Path

# Diagnostic codes are machine-stable.
TYPE_MISMATCH = "TypeMismatch"
UNKNOWN_ATTRIBUTE = "UnknownAttribute"
CONTEXT_VIOLATION = "ContextViolation"
PALETTE_VIOLATION = "PaletteViolation"
ENGINE_ATTRIBUTE = "EngineAttribute"
UNKNOWN_BERRY = "UnknownBerryKind"
RECIPE_SHAPE = "RecipeShape"

BASE = "base"
LOOP = "loop"


@dataclass(frozen=True)
class Diagnostic:
    severity: str  # "error" or "warning"
    code: str
    message: str
    path: Path | None = None
    pos: tuple[int, int] | None = None

    def to_jsonable(self) -> dict:
        out = {"severity": self.severity, "code": self.code, "message": self.message}
        if self.path is not None:
            out["path"] = list(self.path)
        if self.pos is not None:
            out["pos"] = list(self.pos)
        return out


def error(code: str, message: str, path: Path | None = None) -> Diagnostic:
    return Diagnostic("error", code, message, path)


class _Checker:
    def __init__(self, schema: AttributeSchema, context: str):
        self.schema = schema
        self.context = context
        self.out: list[Diagnostic] = []

    def fail(self, code, message, path):
        self.out.append(error(code, message, path))

    # -- expressions --------------------------------------------------------

    def expr_type(self, expr, path: Path, tile_ok: bool) -> str | None:
        """Returns "color", "count", "truth" or None when broken."""
        if isinstance(expr, Lit):
            return "color" if isinstance(expr.value, Color) else "count"
        if isinstance(expr, AttrRef):
            kind = self.schema.attr_type(expr.name)
            if kind is None:
                self.fail(UNKNOWN_ATTRIBUTE, f"attribute {expr.name!r} is not in the schema", path)
            return kind
        if isinstance(expr, TileIs):
            if not tile_ok:
                self.fail(
                    CONTEXT_VIOLATION,
                    "tile checks are only allowed in base-level per-tile code and base-level tests",
                    path,
                )
            return "truth"
        if isinstance(expr, Eq):
            lt = self.expr_type(expr.lhs, path + (0,), tile_ok)
            rt = self.expr_type(expr.rhs, path + (1,), tile_ok)
            for side, t in ((0, lt), (1, rt)):
                if t == "truth":
                    self.fail(TYPE_MISMATCH, "comparisons cannot be compared", path + (side,))
            if lt in ("color", "count") and rt in ("color", "count") and lt != rt:
                self.fail(TYPE_MISMATCH, f"cannot compare {lt} with {rt}", path)
            return "truth"
        self.fail(TYPE_MISMATCH, f"unknown expression {type(expr).__name__}", path)
        return None

    def check_cond(self, cond, path: Path, tile_ok: bool):
        kind = self.expr_type(cond, path, tile_ok)
        if kind in ("color", "count"):
            self.fail(TYPE_MISMATCH, "condition must be a comparison or tile check", path)

    # -- behavior statements -------------------------------------------------

    def check_set_attr(self, stmt: SetAttr, path: Path, tile_ok: bool):
        target_type = self.schema.attr_type(stmt.name)
        if target_type is None:
            self.fail(UNKNOWN_ATTRIBUTE, f"attribute {stmt.name!r} is not in the schema", path)
            return
        if self.schema.is_engine_managed(stmt.name):
            self.fail(ENGINE_ATTRIBUTE, f"{stmt.name!r} is engine-managed and cannot be assigned", path)
        value_type = self.expr_type(stmt.value, path + (0,), tile_ok)
        if value_type == "truth":
            self.fail(TYPE_MISMATCH, "attributes cannot hold comparison results", path + (0,))
            return
        if value_type is not None and value_type != target_type:
            self.fail(TYPE_MISMATCH, f"cannot assign {value_type} to {target_type} attribute", path)
            return
        if target_type == "color":
            palette = set(self.schema.palette(stmt.name))
            value = stmt.value
            if isinstance(value, Lit) and value.value.name not in palette:
                self.fail(
                    PALETTE_VIOLATION,
                    f"{value.value.name!r} is not in the palette of {stmt.name!r}",
                    path + (0,),
                )
            elif isinstance(value, AttrRef) and self.schema.attr_type(value.name) == "color":
                if not set(self.schema.palette(value.name)) <= palette:
                    self.fail(
                        PALETTE_VIOLATION,
                        f"palette of {value.name!r} is wider than palette of {stmt.name!r}",
                        path + (0,),
                    )

    def check_behavior(self, stmts: tuple, path: Path, tile_ok: bool):
        for i, stmt in enumerate(stmts):
            here = path + (i,)
            if isinstance(stmt, SetAttr):
                self.check_set_attr(stmt, here, tile_ok)
            elif isinstance(stmt, Collect):
                if self.context != LOOP:
                    self.fail(CONTEXT_VIOLATION, "collect blocks belong to loop-level recipes", here)
                elif stmt.kind not in self.schema.berry_kinds():
                    self.fail(UNKNOWN_BERRY, f"no {stmt.kind!r} berry counter in the schema", here)
            elif isinstance(stmt, If):
                self.check_cond(stmt.cond, here + (0,), tile_ok)
                self.check_behavior(stmt.then, here + (1,), tile_ok)
                self.check_behavior(stmt.orelse, here + (2,), tile_ok)
            elif isinstance(stmt, Repeat):
                if self.context != LOOP:
                    self.fail(CONTEXT_VIOLATION, "repeat blocks belong to loop-level recipes", here)
                self.check_behavior(stmt.body, here + (0,), tile_ok)
            elif isinstance(stmt, AssertEq):
                self.fail(CONTEXT_VIOLATION, "assertions belong to tests, not behavior code", here)
            else:
                self.fail(CONTEXT_VIOLATION, f"unexpected statement {type(stmt).__name__}", here)

    # -- test statements -----------------------------------------------------

    def check_test(self, stmts: tuple, path: Path, tile_ok: bool):
        for i, stmt in enumerate(stmts):
            here = path + (i,)
            if isinstance(stmt, AssertEq):
                lt = self.expr_type(stmt.lhs, here + (0,), tile_ok)
                rt = self.expr_type(stmt.rhs, here + (1,), tile_ok)
                for side, t in ((0, lt), (1, rt)):
                    if t == "truth":
                        self.fail(TYPE_MISMATCH, "assertion operands must be values", here + (side,))
                if lt in ("color", "count") and rt in ("color", "count") and lt != rt:
                    self.fail(TYPE_MISMATCH, f"cannot compare {lt} with {rt}", here)
            elif isinstance(stmt, If):
                self.check_cond(stmt.cond, here + (0,), tile_ok)
                self.check_test(stmt.then, here + (1,), tile_ok)
                self.check_test(stmt.orelse, here + (2,), tile_ok)
            else:
                self.fail(CONTEXT_VIOLATION, f"only assertions and conditionals may appear in tests, found {type(stmt).__name__}", here)


def typecheck(program_or_test, schema: AttributeSchema, context: str) -> list[Diagnostic]:
    """Check a behavior program, recipe, or test statement block.

    ``context`` is "base" or "loop" and decides where tile checks, repeat
    and collect blocks are allowed.
    """
    if context not in (BASE, LOOP):
        raise ValueError(f"context must be 'base' or 'loop', got {context!r}")
    checker = _Checker(schema, context)
    obj = program_or_test
    if isinstance(obj, CritterProgram):
        if context != BASE:
            checker.fail(CONTEXT_VIOLATION, "per-tile behavior programs belong to base levels", ())
        checker.check_behavior(obj.init, (0,), tile_ok=False)
        checker.check_behavior(obj.on_tile, (1,), tile_ok=(context == BASE))
    elif isinstance(obj, Recipe):
        if context != LOOP:
            checker.fail(CONTEXT_VIOLATION, "recipes belong to loop levels", ())
        if ROUNDS_ATTR not in schema.counters or not schema.is_engine_managed(ROUNDS_ATTR):
            checker.fail(RECIPE_SHAPE, f"loop-level schema must carry the {ROUNDS_ATTR!r} counter", ())
        checker.check_behavior((obj.loop,), (), tile_ok=False)
    elif isinstance(obj, tuple):
        checker.check_test(obj, (), tile_ok=(context == BASE))
    else:
        raise TypeError(f"cannot typecheck {type(obj).__name__}")
    return checker.out


def schema_diagnostics(schema: AttributeSchema, context: str) -> list[Diagnostic]:
    """Well-formedness of the schema itself, per level kind."""
    out: list[Diagnostic] = []
    for name, spec in schema.colors.items():
        if not spec.palette:
            out.append(error(PALETTE_VIOLATION, f"color attribute {name!r} has an empty palette"))
        elif len(set(spec.palette)) != len(spec.palette):
            out.append(error(PALETTE_VIOLATION, f"palette of {name!r} has duplicates"))
        elif spec.initial not in spec.palette:
            out.append(error(PALETTE_VIOLATION, f"initial color of {name!r} is outside its palette"))
    seen_kinds = set()
    for name, spec in schema.counters.items():
        if spec.role == "berry":
            if not spec.kind:
                out.append(error(UNKNOWN_BERRY, f"berry counter {name!r} declares no kind"))
            elif name != berry_counter_name(spec.kind):
                out.append(error(
                    UNKNOWN_BERRY,
                    f"berry counter for {spec.kind!r} must be named {berry_counter_name(spec.kind)!r}",
                ))
            elif spec.kind in seen_kinds:
                out.append(error(UNKNOWN_BERRY, f"duplicate berry kind {spec.kind!r}"))
            else:
                seen_kinds.add(spec.kind)
        elif spec.role == "rounds":
            if name != ROUNDS_ATTR:
                out.append(error(ENGINE_ATTRIBUTE, f"the lap counter must be named {ROUNDS_ATTR!r}"))
        else:
            out.append(error(ENGINE_ATTRIBUTE, f"counter {name!r} has unknown role {spec.role!r}"))
    has_rounds = ROUNDS_ATTR in schema.counters and schema.is_engine_managed(ROUNDS_ATTR)
    if context == LOOP and not has_rounds:
        out.append(error(ENGINE_ATTRIBUTE, f"loop-level schemas must declare the {ROUNDS_ATTR!r} counter"))
    if context == BASE and schema.counters:
        out.append(error(CONTEXT_VIOLATION, "base-level schemas carry no counters"))
    return out
