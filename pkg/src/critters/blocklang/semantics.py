"""Evaluation of expressions, behavior code and tests.

All three entry points are pure: they never mutate their inputs and return
fresh values, so identical inputs always produce identical outputs.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    CounterOverflowError,
    TileContextMissingError,
    TypeMismatchError,
    UnknownAttributeError,
)
from .nodes import (
    AssertEq,
    AttrRef,
    Collect,
    Count,
    CritterState,
    Eq,
    If,
    Lit,
    Repeat,
    SetAttr,
    Terrain,
    TileIs,
    Truth,
    Value,
    berry_counter_name,
)
from .paths import Path

#: Counters above this value abort the run; recipe authors never get close.
DEFAULT_COUNTER_CAP = 10**6


@dataclass(frozen=True)
class AttrChange:
    name: str
    value: Value


@dataclass(frozen=True)
class Collected:
    kind: str
    n: int


Effect = AttrChange | Collected


@dataclass(frozen=True)
class TestOutcome:
    passed: bool
    failed_assertion_path: Path | None = None


def eval_expr(expr, state: CritterState, tile: Terrain | None = None) -> Value:
    """Value of ``expr`` against ``state`` (and the current tile, if any)."""
    if isinstance(expr, Lit):
        return expr.value
    if isinstance(expr, AttrRef):
        value = state.get(expr.name)
        if value is None:
            raise UnknownAttributeError(expr.name)
        return value
    if isinstance(expr, TileIs):
        if tile is None:
            raise TileContextMissingError("tile check evaluated outside tile context")
        return Truth(tile == expr.terrain)
    if isinstance(expr, Eq):
        lhs = eval_expr(expr.lhs, state, tile)
        rhs = eval_expr(expr.rhs, state, tile)
        if isinstance(lhs, Truth) or isinstance(rhs, Truth):
            raise TypeMismatchError("comparison results cannot be compared")
        if type(lhs) is not type(rhs):
            raise TypeMismatchError(f"cannot compare {type(lhs).__name__} with {type(rhs).__name__}")
        return Truth(lhs == rhs)
    raise TypeMismatchError(f"unknown expression {type(expr).__name__}")


def _truthy(expr, state, tile) -> bool:
    value = eval_expr(expr, state, tile)
    if not isinstance(value, Truth):
        raise TypeMismatchError("condition did not evaluate to a comparison result")
    return value.b


def exec_behavior(
    stmts: tuple,
    state: CritterState,
    tile: Terrain | None = None,
    counter_cap: int = DEFAULT_COUNTER_CAP,
) -> tuple[CritterState, list[Effect]]:
    """Run behavior statements, returning the new state and ordered effects."""
    effects: list[Effect] = []
    state = _exec(stmts, state, tile, counter_cap, effects)
    return state, effects


def _exec(stmts, state, tile, cap, effects):
    for stmt in stmts:
        if isinstance(stmt, SetAttr):
            value = eval_expr(stmt.value, state, tile)
            if isinstance(value, Truth):
                raise TypeMismatchError("attributes cannot hold comparison results")
            current = state.get(stmt.name)
            if current is None:
                raise UnknownAttributeError(stmt.name)
            if type(current) is not type(value):
                raise TypeMismatchError(f"attribute {stmt.name!r} cannot change type")
            state = state.with_attr(stmt.name, value)
            effects.append(AttrChange(stmt.name, value))
        elif isinstance(stmt, Collect):
            counter = berry_counter_name(stmt.kind)
            current = state.get(counter)
            if not isinstance(current, Count):
                raise UnknownAttributeError(counter)
            total = current.n + stmt.count
            if total > cap:
                raise CounterOverflowError(f"{counter} exceeded cap {cap}")
            state = state.with_attr(counter, Count(total))
            effects.append(Collected(stmt.kind, stmt.count))
        elif isinstance(stmt, If):
            branch = stmt.then if _truthy(stmt.cond, state, tile) else stmt.orelse
            state = _exec(branch, state, tile, cap, effects)
        elif isinstance(stmt, Repeat):
            for _ in range(stmt.times):
                state = _exec(stmt.body, state, tile, cap, effects)
        else:
            raise TypeMismatchError(f"unexpected statement {type(stmt).__name__}")
    return state


def run_test(
    stmts: tuple,
    state: CritterState,
    tile: Terrain | None = None,
) -> TestOutcome:
    """Execute a test against a state.

    The critter passes iff every executed assertion holds; evaluation stops
    at the first failing assertion and records its path.
    """
    failed = _run_test(stmts, state, tile, ())
    if failed is None:
        return TestOutcome(passed=True)
    return TestOutcome(passed=False, failed_assertion_path=failed)


def _run_test(stmts, state, tile, path) -> Path | None:
    for i, stmt in enumerate(stmts):
        here = path + (i,)
        if isinstance(stmt, AssertEq):
            lhs = eval_expr(stmt.lhs, state, tile)
            rhs = eval_expr(stmt.rhs, state, tile)
            if isinstance(lhs, Truth) or isinstance(rhs, Truth):
                raise TypeMismatchError("assertion operands must be values")
            if type(lhs) is not type(rhs):
                raise TypeMismatchError("assertion operands must share a type")
            if lhs != rhs:
                return here
        elif isinstance(stmt, If):
            branch, slot = (stmt.then, 1) if _truthy(stmt.cond, state, tile) else (stmt.orelse, 2)
            failed = _run_test(branch, state, tile, here + (slot,))
            if failed is not None:
                return failed
        else:
            raise TypeMismatchError(f"unexpected test statement {type(stmt).__name__}")
    return None
