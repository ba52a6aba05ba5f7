"""Block language: AST, canonical JSON form, typechecker and evaluator."""

from .canon import canonical_json, emit_ast, from_jsonable, parse_ast, to_jsonable
from .errors import (
    AstSchemaError,
    AstSyntaxError,
    BlocklangError,
    CounterOverflowError,
    TileContextMissingError,
    TypeMismatchError,
    UnknownAttributeError,
)
from .nodes import (
    COLOR_NAMES,
    ROUNDS_ATTR,
    TERRAIN_CODES,
    TERRAIN_TO_CODE,
    AssertEq,
    AttrRef,
    AttributeSchema,
    BehaviorStmt,
    Collect,
    Color,
    ColorAttr,
    Count,
    CounterAttr,
    CritterProgram,
    CritterState,
    Eq,
    Expr,
    If,
    Lit,
    Program,
    Recipe,
    Repeat,
    SetAttr,
    Terrain,
    TestStmt,
    TileIs,
    Truth,
    Value,
    berry_counter_name,
    plain_to_value,
    value_to_plain,
    walkable,
)
from .paths import (
    BadPathError,
    Path,
    children,
    delete_at,
    get_at,
    insert_at,
    parent_block,
    preorder,
    replace_at,
)
from .semantics import (
    DEFAULT_COUNTER_CAP,
    AttrChange,
    Collected,
    Effect,
    TestOutcome,
    eval_expr,
    exec_behavior,
    run_test,
)
from .typecheck import (
    BASE,
    CONTEXT_VIOLATION,
    ENGINE_ATTRIBUTE,
    LOOP,
    PALETTE_VIOLATION,
    RECIPE_SHAPE,
    TYPE_MISMATCH,
    UNKNOWN_ATTRIBUTE,
    UNKNOWN_BERRY,
    Diagnostic,
    schema_diagnostics,
    typecheck,
)

__all__ = [name for name in dir() if not name.startswith("_")]
