"""Mutants: AST edits, generation, divergence analysis and oracle search.

Everything here is pure and deterministic: catalogs, divergence results and
solver output are reproducible byte for byte.  Mutant evaluation may be
parallelized by callers since results are aggregated commutatively.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .blocklang import (
    AssertEq,
    AttrRef,
    AttributeSchema,
    BadPathError,
    Collect,
    Color,
    Count,
    CritterProgram,
    CritterState,
    Eq,
    If,
    Lit,
    Recipe,
    Repeat,
    ROUNDS_ATTR,
    SetAttr,
    TileIs,
    canonical_json,
    delete_at,
    emit_ast,
    exec_behavior,
    from_jsonable,
    get_at,
    insert_at,
    preorder,
    replace_at,
    to_jsonable,
    typecheck,
)
from .blocklang.paths import Path


class MutationError(Exception):
    pass


class IllTypedReplacementError(MutationError):
    """An edit would produce a structurally or statically broken program."""


class BudgetExceededError(MutationError):
    """The bounded oracle search examined more candidates than allowed."""


# ---------------------------------------------------------------------------
# Edits
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Edit:
    """One AST edit.

    ``replacement=None`` deletes the addressed statement from its block.
    ``insert=True`` inserts the node at the addressed block position; it
    exists mainly so deletions have an inverse.
    """

    path: Path
    replacement: object | None = None
    insert: bool = False

    def to_jsonable(self) -> dict:
        out: dict = {"path": list(self.path)}
        out["replacement"] = None if self.replacement is None else to_jsonable(self.replacement)
        if self.insert:
            out["insert"] = True
        return out

    @staticmethod
    def from_jsonable(obj: dict) -> "Edit":
        path = tuple(obj["path"])
        replacement = obj.get("replacement")
        node = None if replacement is None else from_jsonable(replacement)
        return Edit(path, node, insert=bool(obj.get("insert", False)))


@dataclass(frozen=True)
class MutantSpec:
    id: str
    edits: tuple[Edit, ...]
    display_hint: str = ""

    def to_jsonable(self) -> dict:
        return {
            "id": self.id,
            "edits": [e.to_jsonable() for e in self.edits],
            "displayHint": self.display_hint,
        }

    @staticmethod
    def from_jsonable(obj: dict) -> "MutantSpec":
        return MutantSpec(
            id=obj["id"],
            edits=tuple(Edit.from_jsonable(e) for e in obj["edits"]),
            display_hint=obj.get("displayHint", ""),
        )


@dataclass(frozen=True)
class MutantCatalog:
    mutants: tuple[MutantSpec, ...]
    source: str | None = None

    def ids(self) -> tuple[str, ...]:
        return tuple(m.id for m in self.mutants)

    def get(self, mutant_id: str) -> MutantSpec:
        for m in self.mutants:
            if m.id == mutant_id:
                return m
        raise KeyError(mutant_id)

    def to_jsonable(self) -> dict:
        out: dict = {"mutants": [m.to_jsonable() for m in self.mutants]}
        if self.source is not None:
            out["source"] = self.source
        return out

    @staticmethod
    def from_jsonable(obj: dict) -> "MutantCatalog":
        return MutantCatalog(
            mutants=tuple(MutantSpec.from_jsonable(m) for m in obj["mutants"]),
            source=obj.get("source"),
        )


_EXPR_TYPES = (Lit, AttrRef, TileIs, Eq)
_STMT_TYPES = (SetAttr, Collect, If, Repeat, AssertEq)


def _category(node) -> str:
    if isinstance(node, _EXPR_TYPES):
        return "expr"
    if isinstance(node, _STMT_TYPES):
        return "stmt"
    if isinstance(node, (CritterProgram, Recipe)):
        return "program"
    raise IllTypedReplacementError(f"{type(node).__name__} is not an AST node")


def apply_edits(program, edits, schema: AttributeSchema | None = None, context: str | None = None):
    """Apply edits in order, returning a new program.

    Paths are interpreted against the progressively edited program.  When a
    schema and context are given, the final program must typecheck cleanly.
    """
    current = program
    for edit in edits:
        if edit.insert:
            if edit.replacement is None:
                raise IllTypedReplacementError("insert edits need a node")
            if _category(edit.replacement) != "stmt":
                raise IllTypedReplacementError("only statements can be inserted into blocks")
            current = insert_at(current, edit.path, edit.replacement)
        elif edit.replacement is None:
            current = delete_at(current, edit.path)
        else:
            old = get_at(current, edit.path)
            if isinstance(old, tuple):
                raise BadPathError("path addresses a block, not a node")
            if _category(old) != _category(edit.replacement):
                raise IllTypedReplacementError(
                    f"cannot replace {type(old).__name__} with {type(edit.replacement).__name__}"
                )
            if isinstance(old, Repeat) and len(edit.path) == 1 and isinstance(current, Recipe):
                if not isinstance(edit.replacement, Repeat):
                    raise IllTypedReplacementError("the top-level loop of a recipe must stay a repeat")
            current = replace_at(current, edit.path, edit.replacement)
    if schema is not None and context is not None:
        diagnostics = [d for d in typecheck(current, schema, context) if d.severity == "error"]
        if diagnostics:
            raise IllTypedReplacementError(
                "; ".join(f"{d.code}: {d.message}" for d in diagnostics)
            )
    return current


def reverse_edits(program, edits) -> tuple[Edit, ...]:
    """Edits that undo ``edits`` when applied to the edited program."""
    inverses: list[Edit] = []
    current = program
    for edit in edits:
        if edit.insert:
            inverses.append(Edit(edit.path, None))
            current = insert_at(current, edit.path, edit.replacement)
        elif edit.replacement is None:
            old = get_at(current, edit.path)
            inverses.append(Edit(edit.path, old, insert=True))
            current = delete_at(current, edit.path)
        else:
            old = get_at(current, edit.path)
            inverses.append(Edit(edit.path, old))
            current = replace_at(current, edit.path, edit.replacement)
    return tuple(reversed(inverses))


# ---------------------------------------------------------------------------
# Mutant generation
# ---------------------------------------------------------------------------

COLOR_REPLACE = "colorReplace"
COUNT_REPLACE = "countReplace"
BRANCH_SWAP = "branchSwap"
LOOP_BOUND = "loopBound"
DELETE_STMT = "deleteStmt"

ALL_OPERATORS = (COLOR_REPLACE, COUNT_REPLACE, BRANCH_SWAP, LOOP_BOUND, DELETE_STMT)


def _color_palettes(program, schema: AttributeSchema) -> dict[Path, tuple[str, ...]]:
    """Palette context for every color literal that sits next to an attribute."""
    contexts: dict[Path, tuple[str, ...]] = {}
    for path, node in preorder(program):
        if isinstance(node, SetAttr) and schema.attr_type(node.name) == "color":
            if isinstance(node.value, Lit):
                contexts[path + (0,)] = schema.palette(node.name)
        elif isinstance(node, (Eq, AssertEq)):
            sides = ((node.lhs, 0), (node.rhs, 1))
            for (this, i), (other, _j) in (sides, sides[::-1]):
                if (
                    isinstance(this, Lit)
                    and isinstance(other, AttrRef)
                    and schema.attr_type(other.name) == "color"
                ):
                    contexts[path + (i,)] = schema.palette(other.name)
    return contexts


def _count_candidates(n: int) -> list[int]:
    out = []
    for candidate in (n - 1, n + 1, 0):
        if candidate >= 0 and candidate != n and candidate not in out:
            out.append(candidate)
    return out


def generate_mutants(
    program,
    schema: AttributeSchema,
    operators=ALL_OPERATORS,
    limit: int | None = None,
    context: str | None = None,
) -> MutantCatalog:
    """Enumerate single-edit mutants of a behavior program.

    Enumeration order is fixed: AST preorder, then operator order, then
    value order; results are deduplicated by the post-edit AST and cut off
    at ``limit``.
    """
    if context is None:
        context = "loop" if isinstance(program, Recipe) else "base"
    operators = tuple(op for op in ALL_OPERATORS if op in operators)
    palettes = _color_palettes(program, schema)
    original_text = emit_ast(program)
    seen = {original_text}
    found: list[MutantSpec] = []

    def emit(edit: Edit, hint: str) -> bool:
        """Returns False once the limit is hit."""
        if limit is not None and len(found) >= limit:
            return False
        try:
            mutated = apply_edits(program, [edit], schema, context)
        except (BadPathError, IllTypedReplacementError, ValueError):
            return True
        text = emit_ast(mutated)
        if text in seen:
            return True
        seen.add(text)
        found.append(MutantSpec(id=f"gen-{len(found) + 1:03d}", edits=(edit,), display_hint=hint))
        return True

    for path, node in preorder(program):
        if limit is not None and len(found) >= limit:
            break
        for op in operators:
            if op == COLOR_REPLACE and isinstance(node, Lit) and isinstance(node.value, Color):
                palette = palettes.get(path, ())
                for name in palette:
                    if name == node.value.name:
                        continue
                    if not emit(
                        Edit(path, Lit(Color(name))),
                        f"uses {name} instead of {node.value.name}",
                    ):
                        break
            elif op == COUNT_REPLACE and isinstance(node, Lit) and isinstance(node.value, Count):
                for n in _count_candidates(node.value.n):
                    if not emit(
                        Edit(path, Lit(Count(n))),
                        f"compares against {n} instead of {node.value.n}",
                    ):
                        break
            elif op == COUNT_REPLACE and isinstance(node, Collect):
                for n in _count_candidates(node.count):
                    if not emit(
                        Edit(path, Collect(node.kind, n)),
                        f"picks {n} {node.kind} berries instead of {node.count}",
                    ):
                        break
            elif op == BRANCH_SWAP and isinstance(node, If) and node.then != node.orelse:
                emit(
                    Edit(path, If(node.cond, node.orelse, node.then)),
                    "swaps the two branches",
                )
            elif op == LOOP_BOUND and isinstance(node, Repeat):
                for times in (node.times - 1, node.times + 1):
                    if times < 1:
                        continue
                    if not emit(
                        Edit(path, Repeat(times, node.body)),
                        f"repeats {times} times instead of {node.times}",
                    ):
                        break
            elif op == DELETE_STMT and isinstance(node, _STMT_TYPES):
                if path and isinstance(get_at(program, path[:-1]), tuple):
                    emit(Edit(path, None), "skips a step")

    return MutantCatalog(tuple(found))


# ---------------------------------------------------------------------------
# Reference execution tables (no tests installed)
# ---------------------------------------------------------------------------

def recipe_lap_states(recipe: Recipe, schema: AttributeSchema, initial_attrs=None) -> list[CritterState]:
    """State observable at the signpost on each lap (1-based list index + 1).

    The lap counter is bumped at lap start and the whole lap body runs
    before the signpost is reached, so entry ``k-1`` is what a signpost
    test sees during lap ``k``.
    """
    state = schema.initial_state(initial_attrs)
    out = []
    for lap in range(1, recipe.loop.times + 1):
        state = state.with_attr(ROUNDS_ATTR, Count(lap))
        state, _ = exec_behavior(recipe.loop.body, state)
        out.append(state)
    return out


def cut_tile_states(program: CritterProgram, schema, terrains, initial_attrs=None) -> list[CritterState]:
    """State after entering each path tile.

    Index 0 is the state right after initialization at the village; per-tile
    code runs on every tile entered afterwards.
    """
    state = schema.initial_state(initial_attrs)
    state, _ = exec_behavior(program.init, state)
    out = [state]
    for terrain in terrains[1:]:
        state, _ = exec_behavior(program.on_tile, state, terrain)
        out.append(state)
    return out


@dataclass(frozen=True)
class Divergence:
    """First observable difference between a mutant and the healthy program."""

    round: int | None = None
    tile_index: int | None = None


def _roster_attrs_for(level, mutant_id: str) -> list[dict]:
    return [entry.attrs for entry in level.roster.mutants if entry.id == mutant_id]


def first_divergence(level, mutant: MutantSpec, initial_attrs=None) -> Divergence | None:
    """Differentially execute healthy vs mutant with no tests installed.

    For loop levels: the smallest lap whose signpost state differs, or the
    first lap that only one of the two executes, or None for an equivalent
    mutant.  For base levels: the first path tile index at which states
    differ, or None.

    ``initial_attrs`` defaults to the mutant's first roster instance.
    """
    if initial_attrs is None:
        roster_attrs = _roster_attrs_for(level, mutant.id)
        initial_attrs = roster_attrs[0] if roster_attrs else {}
    mutated = apply_edits(level.program, mutant.edits, level.schema, level.kind)
    if level.kind == "loop":
        healthy = recipe_lap_states(level.program, level.schema, initial_attrs)
        broken = recipe_lap_states(mutated, level.schema, initial_attrs)
        for lap, (h, m) in enumerate(zip(healthy, broken), start=1):
            if h != m:
                return Divergence(round=lap)
        if len(healthy) != len(broken):
            return Divergence(round=min(len(healthy), len(broken)) + 1)
        return None
    terrains = level.board.path_terrains()
    healthy = cut_tile_states(level.program, level.schema, terrains, initial_attrs)
    broken = cut_tile_states(mutated, level.schema, terrains, initial_attrs)
    for index, (h, m) in enumerate(zip(healthy, broken)):
        if h != m:
            return Divergence(tile_index=index)
    return None


# ---------------------------------------------------------------------------
# Adequacy
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MutantAdequacy:
    killed: bool
    kill_position: int | None  # lap number (loop) or path tile index (base)


@dataclass(frozen=True)
class AdequacyReport:
    per_mutant: dict[str, MutantAdequacy]
    false_positives: int
    killed_count: int
    total: int

    @property
    def mutation_score(self) -> float:
        return self.killed_count / self.total if self.total else 0.0

    def to_jsonable(self) -> dict:
        return {
            "falsePositives": self.false_positives,
            "killed": self.killed_count,
            "mutants": {
                mid: {"killed": a.killed, "killPosition": a.kill_position}
                for mid, a in sorted(self.per_mutant.items())
            },
            "mutationScore": self.mutation_score,
            "total": self.total,
        }


def adequacy(level, tests, catalog: MutantCatalog | None = None) -> AdequacyReport:
    """Judge a test configuration by running the full simulation once.

    ``tests`` is a list of portal placements (base) or signpost tests
    (loop); kill positions are lap numbers or path tile indices.
    """
    from . import engine  # simulation lives one layer up

    if catalog is None:
        catalog = level.mutant_catalog
    if level.kind == "loop":
        result, _timeline = engine.simulate_loop(level, tests, seed=0)
    else:
        result, _timeline = engine.simulate_base(level, tests, seed=0)

    false_positives = 0
    kills: dict[str, list[int | None]] = {m.id: [] for m in catalog.mutants}
    for outcome in result.outcomes:
        intercepted = outcome.kind in ("teleported", "sent_back")
        if outcome.origin == "healthy":
            if intercepted:
                false_positives += 1
        elif outcome.origin in kills:
            kills[outcome.origin].append(outcome.position if intercepted else None)

    per_mutant: dict[str, MutantAdequacy] = {}
    killed_count = 0
    for mid, positions in kills.items():
        killed = bool(positions) and all(p is not None for p in positions)
        position = min((p for p in positions if p is not None), default=None)
        per_mutant[mid] = MutantAdequacy(killed=killed, kill_position=position)
        if killed:
            killed_count += 1
    return AdequacyReport(
        per_mutant=per_mutant,
        false_positives=false_positives,
        killed_count=killed_count,
        total=len(catalog.mutants),
    )


# ---------------------------------------------------------------------------
# Bounded oracle search
# ---------------------------------------------------------------------------

DEFAULT_LITERAL_MAX = 10
DEFAULT_BUDGET = 2_000_000


def _atom_nodes(schema: AttributeSchema, make, literal_max: int):
    """All comparison atoms, sorted by canonical text.

    Operand space: every attribute on the left, compared to every other
    attribute of the same type or to a literal from the schema pool
    (palette colors, counts 0..literal_max).
    """
    atoms = []
    names = sorted(schema.colors) + sorted(schema.counters)
    for lhs in names:
        lhs_type = schema.attr_type(lhs)
        for rhs in names:
            if rhs != lhs and schema.attr_type(rhs) == lhs_type:
                atoms.append(make(AttrRef(lhs), AttrRef(rhs)))
        if lhs_type == "color":
            for color in schema.palette(lhs):
                atoms.append(make(AttrRef(lhs), Lit(Color(color))))
        else:
            for n in range(literal_max + 1):
                atoms.append(make(AttrRef(lhs), Lit(Count(n))))
    atoms.sort(key=emit_ast)
    return atoms


def _shape_blocks(n: int, depth: int):
    """Statement-block shapes holding exactly ``n`` assertion holes."""
    if n == 0:
        yield ()
        return
    for first in range(1, n + 1):
        for item in _shape_items(first, depth):
            for rest in _shape_blocks(n - first, depth):
                yield (item,) + rest


def _shape_items(k: int, depth: int):
    if k == 1:
        yield "A"
    if depth >= 1:
        for then_count in range(k + 1):
            for then_shape in _shape_blocks(then_count, depth - 1):
                for else_shape in _shape_blocks(k - then_count, depth - 1):
                    yield ("IF", then_shape, else_shape)


def _shape_depth(shape) -> int:
    depth = 0
    for item in shape:
        if item != "A":
            depth = max(depth, 1 + max(_shape_depth(item[1]), _shape_depth(item[2])))
    return depth


def _shape_slots(shape) -> list[str]:
    """Hole kinds in preorder: "C" for conditions, "A" for assertions."""
    slots = []
    for item in shape:
        if item == "A":
            slots.append("A")
        else:
            slots.append("C")
            slots.extend(_shape_slots(item[1]))
            slots.extend(_shape_slots(item[2]))
    return slots


def _fill_shape(shape, fills: list, cursor: list[int]):
    out = []
    for item in shape:
        if item == "A":
            out.append(("A", fills[cursor[0]]))
            cursor[0] += 1
        else:
            cond = fills[cursor[0]]
            cursor[0] += 1
            then_block = _fill_shape(item[1], fills, cursor)
            else_block = _fill_shape(item[2], fills, cursor)
            out.append(("IF", cond, then_block, else_block))
    return tuple(out)


def _compiled_to_nodes(compiled, assert_atoms, cond_atoms) -> tuple:
    out = []
    for item in compiled:
        if item[0] == "A":
            out.append(assert_atoms[item[1]])
        else:
            out.append(If(
                cond_atoms[item[1]],
                _compiled_to_nodes(item[2], assert_atoms, cond_atoms),
                _compiled_to_nodes(item[3], assert_atoms, cond_atoms),
            ))
    return tuple(out)


def _verdict(compiled, truth_row) -> bool:
    """Does the compiled test pass for one precomputed truth row?"""
    for item in compiled:
        if item[0] == "A":
            if not truth_row[item[1]]:
                return False
        else:
            branch = item[2] if truth_row[item[1]] else item[3]
            if not _verdict(branch, truth_row):
                return False
    return True


@dataclass
class _LoopSearchSpace:
    entries: list  # (origin, [truth_row per lap]) with truth_row: list[bool] per atom
    assert_atoms: list
    cond_atoms: list
    mutant_ids: list[str]


def _loop_space(level, literal_max: int) -> _LoopSearchSpace:
    from .blocklang import eval_expr

    schema = level.schema
    assert_atoms = _atom_nodes(schema, AssertEq, literal_max)
    cond_atoms = _atom_nodes(schema, Eq, literal_max)
    # Assertion i and condition i compare the same operands, so one shared
    # truth table drives both.
    pairs = [Eq(a.lhs, a.rhs) for a in assert_atoms]

    entries = []
    for origin, attrs in _loop_roster_entries(level):
        if origin == "healthy":
            program = level.program
        else:
            program = apply_edits(level.program, level.mutant_catalog.get(origin).edits,
                                  schema, level.kind)
        states = recipe_lap_states(program, schema, attrs)
        rows = []
        for state in states:
            rows.append([eval_expr(atom, state).b for atom in pairs])
        entries.append((origin, rows))
    return _LoopSearchSpace(
        entries=entries,
        assert_atoms=assert_atoms,
        cond_atoms=cond_atoms,
        mutant_ids=[m.id for m in level.mutant_catalog.mutants],
    )


def _loop_roster_entries(level):
    for entry in level.roster.healthy:
        yield "healthy", entry.attrs
    for entry in level.roster.mutants:
        yield entry.id, entry.attrs


def _loop_candidates(space: _LoopSearchSpace, max_assertions: int, max_if_depth: int, budget: int):
    """Compiled candidate tests in documented order.

    Order: assertion count, then actual if depth, then shape, then slot
    fills in canonical atom order.
    """
    examined = 0
    atom_count = len(space.assert_atoms)
    for n in range(1, max_assertions + 1):
        shapes = sorted(set(_shape_blocks(n, max_if_depth)), key=repr)
        for depth in range(0, max_if_depth + 1):
            for shape in shapes:
                if _shape_depth(shape) != depth:
                    continue
                slots = _shape_slots(shape)
                for fills in itertools.product(range(atom_count), repeat=len(slots)):
                    examined += 1
                    if examined > budget:
                        raise BudgetExceededError(f"examined more than {budget} candidate tests")
                    yield _fill_shape(shape, list(fills), [0])


def _loop_accepts(space: _LoopSearchSpace, compiled, target: str | None) -> bool:
    """Zero false positives, and kills the target mutant (or all of them)."""
    killed: set[str] = set()
    for origin, rows in space.entries:
        fail_lap = None
        for lap, row in enumerate(rows, start=1):
            if not _verdict(compiled, row):
                fail_lap = lap
                break
        if origin == "healthy":
            if fail_lap is not None:
                return False
        elif fail_lap is not None:
            killed.add(origin)
    if target is not None:
        return target in killed
    return killed >= set(space.mutant_ids)


def _base_space(level, literal_max: int):
    from .blocklang import eval_expr

    schema = level.schema
    assert_atoms = _atom_nodes(schema, AssertEq, literal_max)
    pairs = [Eq(a.lhs, a.rhs) for a in assert_atoms]
    terrains = level.board.path_terrains()
    sites = [i for i in range(1, len(level.board.path) - 1)]
    entries = []
    for origin, attrs in _base_roster_entries(level):
        if origin == "healthy":
            program = level.program
        else:
            program = apply_edits(level.program, level.mutant_catalog.get(origin).edits,
                                  schema, level.kind)
        states = cut_tile_states(program, schema, terrains, attrs)
        grid = {site: [eval_expr(atom, states[site], terrains[site]).b for atom in pairs]
                for site in sites}
        entries.append((origin, grid))
    return entries, assert_atoms, sites, [m.id for m in level.mutant_catalog.mutants]


def _base_roster_entries(level):
    return _loop_roster_entries(level)


def _base_accepts(entries, mutant_ids, candidate, target: str | None) -> bool:
    killed: set[str] = set()
    for origin, grid in entries:
        fail_site = None
        for site, atom in candidate:
            if not grid[site][atom]:
                fail_site = site
                break
        if origin == "healthy":
            if fail_site is not None:
                return False
        elif fail_site is not None:
            killed.add(origin)
    if target is not None:
        return target in killed
    return killed >= set(mutant_ids)


def _base_candidates(sites, atom_count, max_portals: int, budget: int):
    examined = 0
    for n in range(1, max_portals + 1):
        for combo in itertools.combinations(sites, n):
            for atoms in itertools.product(range(atom_count), repeat=n):
                examined += 1
                if examined > budget:
                    raise BudgetExceededError(f"examined more than {budget} candidate placements")
                yield tuple(zip(combo, atoms))


def solve_min_test(
    level,
    max_assertions: int,
    max_if_depth: int,
    *,
    literal_max: int = DEFAULT_LITERAL_MAX,
    budget: int = DEFAULT_BUDGET,
):
    """Smallest test configuration with mutation score 1.0 and no false
    positives, or None if the bounded space holds none.

    Loop levels get a signpost test (a statement tuple); base levels get a
    tuple of single-assertion portal placements, at most ``max_assertions``
    of them.  Results are confirmed against the full simulation before
    being returned.
    """
    if max_assertions < 1 or max_if_depth < 0:
        raise ValueError("bounds must allow at least one assertion")
    if level.kind == "loop":
        space = _loop_space(level, literal_max)
        for compiled in _loop_candidates(space, max_assertions, max_if_depth, budget):
            if _loop_accepts(space, compiled, target=None):
                test = _compiled_to_nodes(compiled, space.assert_atoms, space.cond_atoms)
                report = adequacy(level, [_signpost_test(0, test)])
                if report.mutation_score == 1.0 and report.false_positives == 0:
                    return test
        return None

    entries, assert_atoms, sites, mutant_ids = _base_space(level, literal_max)
    for candidate in _base_candidates(sites, len(assert_atoms), max_assertions, budget):
        if _base_accepts(entries, mutant_ids, candidate, target=None):
            placements = _candidate_placements(level, candidate, assert_atoms)
            report = adequacy(level, placements)
            if report.mutation_score == 1.0 and report.false_positives == 0:
                return placements
    return None


def _candidate_placements(level, candidate, assert_atoms):
    from .engine import PortalPlacement

    return tuple(
        PortalPlacement(tile=tuple(level.board.path[site]), test=(assert_atoms[atom],))
        for site, atom in candidate
    )


def _signpost_test(signpost: int, test: tuple):
    from .engine import SignpostTest

    return SignpostTest(signpost=signpost, test=test)


def mutant_is_killable(
    level,
    mutant_id: str,
    max_assertions: int,
    max_if_depth: int,
    *,
    literal_max: int = DEFAULT_LITERAL_MAX,
    budget: int = DEFAULT_BUDGET,
) -> bool:
    """Can any bounded test kill this mutant without false positives?

    Exceeding the budget counts as killable: the caller only warns on a
    proven exhaustion of the space.
    """
    try:
        if level.kind == "loop":
            space = _loop_space(level, literal_max)
            for compiled in _loop_candidates(space, max_assertions, max_if_depth, budget):
                if _loop_accepts(space, compiled, target=mutant_id):
                    return True
            return False
        entries, assert_atoms, sites, _ids = _base_space(level, literal_max)
        for candidate in _base_candidates(sites, len(assert_atoms), max_assertions, budget):
            if _base_accepts(entries, None, candidate, target=mutant_id):
                return True
        return False
    except BudgetExceededError:
        return True


def catalog_to_text(catalog: MutantCatalog) -> str:
    return canonical_json(catalog.to_jsonable())
