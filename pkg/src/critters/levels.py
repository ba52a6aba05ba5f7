"""Level format, validation and the built-in catalog.

A level file is a JSON document with the keys id, kind, title, flavor,
schema, board, program, mutants, roster and unlock.  Tiles are encoded as
rows of single-character terrain codes (g, d, i, w, o for wood) and all
positions are [x, y] with the origin at the top left.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from types import MappingProxyType
from typing import Mapping

from . import mutation
from .blocklang import (
    AttributeSchema,
    ColorAttr,
    CounterAttr,
    CritterProgram,
    Recipe,
    Terrain,
    TERRAIN_CODES,
    TERRAIN_TO_CODE,
    from_jsonable,
    to_jsonable,
    typecheck,
    walkable,
)
from .blocklang.errors import AstSchemaError
from .blocklang.typecheck import Diagnostic, error, schema_diagnostics
from .mutation import BadPathError, IllTypedReplacementError, MutantCatalog


class LevelSyntaxError(Exception):
    """The level file is not syntactically usable."""


class ValidationFailedError(Exception):
    def __init__(self, diagnostics):
        errors = [d for d in diagnostics if d.severity == "error"]
        super().__init__("; ".join(f"{d.code}: {d.message}" for d in errors) or "validation failed")
        self.diagnostics = list(diagnostics)


# ---------------------------------------------------------------------------
# Board
# ---------------------------------------------------------------------------

Pos = tuple[int, int]


@dataclass(frozen=True)
class Bush:
    pos: Pos
    kind: str


@dataclass(frozen=True)
class Board:
    width: int
    height: int
    tiles: tuple  # rows of Terrain tuples
    path: tuple  # ordered waypoints
    village: Pos | None = None
    tower: Pos | None = None
    basket: Pos | None = None
    crossing: Pos | None = None
    bushes: tuple = ()
    signposts: tuple = ()

    def in_bounds(self, pos) -> bool:
        x, y = pos
        return 0 <= x < self.width and 0 <= y < self.height

    def terrain_at(self, pos) -> Terrain:
        x, y = pos
        return self.tiles[y][x]

    def is_walkable(self, pos) -> bool:
        return self.in_bounds(pos) and walkable(self.terrain_at(pos))

    def path_terrains(self) -> list[Terrain]:
        return [self.terrain_at(p) for p in self.path]

    def to_jsonable(self) -> dict:
        landmarks: dict = {}
        for name in ("village", "tower", "basket", "crossing"):
            pos = getattr(self, name)
            if pos is not None:
                landmarks[name] = list(pos)
        if self.bushes:
            landmarks["bushes"] = [{"kind": b.kind, "pos": list(b.pos)} for b in self.bushes]
        if self.signposts:
            landmarks["signposts"] = [list(p) for p in self.signposts]
        return {
            "width": self.width,
            "height": self.height,
            "tiles": ["".join(TERRAIN_TO_CODE[t] for t in row) for row in self.tiles],
            "path": [list(p) for p in self.path],
            "landmarks": landmarks,
        }

    @staticmethod
    def from_jsonable(obj: dict) -> "Board":
        try:
            width = int(obj["width"])
            height = int(obj["height"])
            rows = obj["tiles"]
            tiles = []
            for row in rows:
                tiles.append(tuple(TERRAIN_CODES[code] for code in row))
            landmarks = obj.get("landmarks", {})

            def pos(key):
                return tuple(landmarks[key]) if key in landmarks else None

            return Board(
                width=width,
                height=height,
                tiles=tuple(tiles),
                path=tuple(tuple(p) for p in obj["path"]),
                village=pos("village"),
                tower=pos("tower"),
                basket=pos("basket"),
                crossing=pos("crossing"),
                bushes=tuple(
                    Bush(pos=tuple(b["pos"]), kind=b["kind"])
                    for b in landmarks.get("bushes", [])
                ),
                signposts=tuple(tuple(p) for p in landmarks.get("signposts", [])),
            )
        except KeyError as exc:
            raise LevelSyntaxError(f"board is missing {exc}") from None


# ---------------------------------------------------------------------------
# Roster and level
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RosterHealthy:
    attrs: Mapping = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "attrs", MappingProxyType(dict(self.attrs)))


@dataclass(frozen=True)
class RosterMutant:
    id: str
    attrs: Mapping = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "attrs", MappingProxyType(dict(self.attrs)))


@dataclass(frozen=True)
class RosterConfig:
    healthy: tuple = ()
    mutants: tuple = ()
    spawn_interval: int = 8

    def to_jsonable(self) -> dict:
        return {
            "healthy": [({"attrs": dict(e.attrs)} if e.attrs else {}) for e in self.healthy],
            "mutants": [
                {"id": e.id, **({"attrs": dict(e.attrs)} if e.attrs else {})}
                for e in self.mutants
            ],
            "spawnInterval": self.spawn_interval,
        }

    @staticmethod
    def from_jsonable(obj: dict) -> "RosterConfig":
        return RosterConfig(
            healthy=tuple(RosterHealthy(attrs=e.get("attrs", {})) for e in obj.get("healthy", [])),
            mutants=tuple(
                RosterMutant(id=e["id"], attrs=e.get("attrs", {}))
                for e in obj.get("mutants", [])
            ),
            spawn_interval=int(obj.get("spawnInterval", 8)),
        )


@dataclass(frozen=True)
class Unlock:
    requires_level: str
    min_points: int

    def to_jsonable(self) -> dict:
        return {"requiresLevel": self.requires_level, "minPoints": self.min_points}


@dataclass(frozen=True)
class SolverBounds:
    assertions: int = 2
    depth: int = 1
    literal_max: int = 10

    def to_jsonable(self) -> dict:
        return {"assertions": self.assertions, "depth": self.depth, "literalMax": self.literal_max}


@dataclass(frozen=True)
class Level:
    id: str
    kind: str  # "base" or "loop"
    title: str
    flavor: str
    schema: AttributeSchema
    board: Board
    program: object  # CritterProgram or Recipe
    mutant_catalog: MutantCatalog
    roster: RosterConfig
    unlock: Unlock | None = None
    solver_bounds: SolverBounds = field(default_factory=SolverBounds)

    def to_jsonable(self) -> dict:
        return {
            "id": self.id,
            "kind": self.kind,
            "title": self.title,
            "flavor": self.flavor,
            "schema": _schema_to_jsonable(self.schema),
            "board": self.board.to_jsonable(),
            "program": to_jsonable(self.program),
            "mutants": [m.to_jsonable() for m in self.mutant_catalog.mutants],
            "roster": self.roster.to_jsonable(),
            "unlock": self.unlock.to_jsonable() if self.unlock else None,
            "solver": self.solver_bounds.to_jsonable(),
        }


def _schema_to_jsonable(schema: AttributeSchema) -> dict:
    colors = {
        name: {"palette": list(spec.palette), "initial": spec.initial}
        for name, spec in schema.colors.items()
    }
    counters = {}
    for name, spec in schema.counters.items():
        entry = {"role": spec.role}
        if spec.kind:
            entry["kind"] = spec.kind
        counters[name] = entry
    return {"colors": colors, "counters": counters}


def _schema_from_jsonable(obj: dict) -> AttributeSchema:
    colors = {
        name: ColorAttr(palette=tuple(spec["palette"]), initial=spec["initial"])
        for name, spec in obj.get("colors", {}).items()
    }
    counters = {
        name: CounterAttr(role=spec["role"], kind=spec.get("kind"))
        for name, spec in obj.get("counters", {}).items()
    }
    return AttributeSchema(colors=colors, counters=counters)


def level_from_jsonable(obj: dict) -> Level:
    try:
        unlock_obj = obj.get("unlock")
        solver_obj = obj.get("solver") or {}
        return Level(
            id=obj["id"],
            kind=obj["kind"],
            title=obj.get("title", obj["id"]),
            flavor=obj.get("flavor", ""),
            schema=_schema_from_jsonable(obj["schema"]),
            board=Board.from_jsonable(obj["board"]),
            program=from_jsonable(obj["program"]),
            mutant_catalog=MutantCatalog(
                mutants=tuple(mutation.MutantSpec.from_jsonable(m) for m in obj.get("mutants", [])),
                source=obj["id"],
            ),
            roster=RosterConfig.from_jsonable(obj.get("roster", {})),
            unlock=Unlock(unlock_obj["requiresLevel"], int(unlock_obj["minPoints"]))
            if unlock_obj
            else None,
            solver_bounds=SolverBounds(
                assertions=int(solver_obj.get("assertions", 2)),
                depth=int(solver_obj.get("depth", 1)),
                literal_max=int(solver_obj.get("literalMax", 10)),
            ),
        )
    except (KeyError, TypeError, ValueError, AstSchemaError) as exc:
        raise LevelSyntaxError(f"bad level document: {exc}") from None


def emit_level(level: Level) -> str:
    """Pretty, key-sorted rendering used for level files on disk."""
    return json.dumps(level.to_jsonable(), sort_keys=True, indent=2) + "\n"


def load_level(text: str) -> Level:
    """Parse and fully validate a level document."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise LevelSyntaxError(str(exc)) from None
    level = level_from_jsonable(obj)
    diagnostics = validate_level(level)
    if any(d.severity == "error" for d in diagnostics):
        raise ValidationFailedError(diagnostics)
    return level


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------

_EXPECTED_SIZE = {"base": 16, "loop": 8}


def _adjacent(a: Pos, b: Pos) -> bool:
    return abs(a[0] - b[0]) + abs(a[1] - b[1]) == 1


def validate_level(level: Level) -> list[Diagnostic]:
    out: list[Diagnostic] = []
    board = level.board

    if level.kind not in ("base", "loop"):
        return [error("BadKind", f"unknown level kind {level.kind!r}")]

    size = _EXPECTED_SIZE[level.kind]
    if board.width != size or board.height != size:
        out.append(error("BadDimensions", f"{level.kind} boards are {size}x{size}"))
    if len(board.tiles) != board.height or any(len(row) != board.width for row in board.tiles):
        out.append(error("BadDimensions", "tile grid does not match the declared size"))
        return out

    # Path geometry.
    if len(board.path) < 2:
        out.append(error("PathTooShort", "the path needs at least two waypoints"))
        return out
    for pos in board.path:
        if not board.in_bounds(pos):
            out.append(error("OutOfBounds", f"path waypoint {list(pos)} is off the board"))
            return out
        if not board.is_walkable(pos):
            out.append(error("UnwalkablePath", f"path waypoint {list(pos)} is not walkable"))
    for a, b in zip(board.path, board.path[1:]):
        if not _adjacent(a, b):
            out.append(error("PathNotAdjacent", f"waypoints {list(a)} and {list(b)} do not touch"))

    path_index = {pos: i for i, pos in enumerate(board.path)}

    if level.kind == "base":
        if board.village is None or board.tower is None:
            out.append(error("MissingLandmark", "base levels need a village and a tower"))
        else:
            if board.path[0] != board.village:
                out.append(error("PathEndpoints", "the path must start at the village"))
            if board.path[-1] != board.tower:
                out.append(error("PathEndpoints", "the path must end at the tower"))
    else:
        if board.basket is None or board.crossing is None or not board.signposts:
            out.append(error("MissingLandmark", "loop levels need a basket, a crossing and a signpost"))
        else:
            if board.path[0] != board.basket:
                out.append(error("PathEndpoints", "the cycle must start at the basket"))
            if not _adjacent(board.path[-1], board.path[0]):
                out.append(error("CycleNotClosed", "the last waypoint must touch the basket"))
            if len(set(board.path)) != len(board.path):
                out.append(error("PathRepeats", "cycle waypoints may not repeat"))
            landmarks = [("crossing", board.crossing)]
            landmarks += [("signpost", pos) for pos in board.signposts]
            landmarks += [("bush", b.pos) for b in board.bushes]
            for name, pos in landmarks:
                if pos not in path_index:
                    out.append(error("LandmarkOffPath", f"{name} at {list(pos)} is not on the path"))
            if all(pos in path_index for _n, pos in landmarks):
                signpost_indices = [path_index[pos] for pos in board.signposts]
                if any(i == 0 for i in signpost_indices) or path_index[board.crossing] == 0:
                    out.append(error("LandmarkOverlap", "signposts and crossing cannot sit on the basket"))
                elif signpost_indices and path_index[board.crossing] <= max(signpost_indices):
                    out.append(error(
                        "CrossingBeforeSignpost",
                        "the crossing must come after every signpost so failed collectors can leave",
                    ))
            spots = [board.crossing, *board.signposts, *(b.pos for b in board.bushes), board.basket]
            if len(set(spots)) != len(spots):
                out.append(error("LandmarkOverlap", "loop landmarks must occupy distinct tiles"))
            board_kinds = {b.kind for b in board.bushes}
            for kind in level.schema.berry_kinds():
                if kind not in board_kinds:
                    out.append(Diagnostic("warning", "NoBushForKind",
                                          f"no {kind} bush on the board; picking is invisible"))
            for bush in board.bushes:
                if bush.kind not in level.schema.berry_kinds():
                    out.append(error("BushKindUnknown", f"bush kind {bush.kind!r} not in the schema"))

    # Schema and program.
    out.extend(schema_diagnostics(level.schema, level.kind))
    expected_program = CritterProgram if level.kind == "base" else Recipe
    if not isinstance(level.program, expected_program):
        code = "RecipeShape" if level.kind == "loop" else "ProgramKind"
        out.append(error(code, f"{level.kind} levels need a {expected_program.__name__} program"))
        return out
    out.extend(typecheck(level.program, level.schema, level.kind))

    # Mutants.
    ids = [m.id for m in level.mutant_catalog.mutants]
    if len(set(ids)) != len(ids):
        out.append(error("DuplicateMutantId", "mutant ids must be unique"))
    from .blocklang import emit_ast

    original = emit_ast(level.program)
    seen: dict[str, str] = {}
    broken: set[str] = set()
    for spec in level.mutant_catalog.mutants:
        try:
            mutated = mutation.apply_edits(level.program, spec.edits, level.schema, level.kind)
        except (BadPathError, IllTypedReplacementError, ValueError) as exc:
            out.append(error("BadMutantEdit", f"mutant {spec.id!r}: {exc}"))
            broken.add(spec.id)
            continue
        text = emit_ast(mutated)
        if text == original:
            out.append(error("MutantUnchanged", f"mutant {spec.id!r} equals the healthy program"))
            broken.add(spec.id)
        elif text in seen:
            out.append(error("DuplicateMutant", f"mutants {seen[text]!r} and {spec.id!r} coincide"))
        else:
            seen[text] = spec.id

    # Roster.
    if not level.roster.healthy:
        out.append(error("EmptyRoster", "at least one healthy critter is required"))
    roster_ids = {entry.id for entry in level.roster.mutants}
    for entry in level.roster.mutants:
        if entry.id not in ids:
            out.append(error("UnknownRosterMutant", f"roster names unknown mutant {entry.id!r}"))
    for mid in ids:
        if mid not in roster_ids:
            out.append(error("MissingRosterMutant", f"catalog mutant {mid!r} never spawns"))
    for entry in [*level.roster.healthy, *level.roster.mutants]:
        for name, plain in entry.attrs.items():
            kind = level.schema.attr_type(name)
            if kind is None:
                out.append(error("BadRosterAttrs", f"roster sets unknown attribute {name!r}"))
            elif level.schema.is_engine_managed(name):
                out.append(error("BadRosterAttrs", f"roster may not set {name!r}"))
            elif kind == "color" and plain not in level.schema.palette(name):
                out.append(error("BadRosterAttrs", f"{plain!r} is outside the palette of {name!r}"))
            elif kind == "count" and (not isinstance(plain, int) or plain < 0):
                out.append(error("BadRosterAttrs", f"counter {name!r} needs a non-negative integer"))

    if level.kind == "loop" and level.unlock is None:
        out.append(Diagnostic("warning", "NoUnlockRule", "loop levels usually require a base score"))

    if any(d.severity == "error" for d in out):
        return out

    # Behavioral checks need a structurally sound level.
    for spec in level.mutant_catalog.mutants:
        if spec.id in broken:
            continue
        instance_attrs = [e.attrs for e in level.roster.mutants if e.id == spec.id] or [{}]
        divergences = [mutation.first_divergence(level, spec, dict(a)) for a in instance_attrs]
        if all(d is None for d in divergences):
            out.append(error("EquivalentMutant",
                             f"mutant {spec.id!r} is observably identical to the healthy program"))
            continue
        bounds = level.solver_bounds
        if not mutation.mutant_is_killable(
            level, spec.id, bounds.assertions, bounds.depth, literal_max=bounds.literal_max,
        ):
            out.append(Diagnostic(
                "warning", "UnkillableMutant",
                f"no test within bounds {bounds.assertions}/{bounds.depth} "
                f"catches mutant {spec.id!r} without false positives",
            ))
    return out


# ---------------------------------------------------------------------------
# Built-in catalog
# ---------------------------------------------------------------------------

BUILTIN_IDS = ("base-01", "loop-01", "loop-02", "loop-10")


@lru_cache(maxsize=1)
def builtin_catalog() -> tuple[Level, ...]:
    """All shipped levels, loaded from package data and fully validated."""
    levels = []
    root = resources.files("critters") / "levels_builtin"
    for level_id in BUILTIN_IDS:
        text = (root / f"{level_id}.json").read_text(encoding="utf-8")
        levels.append(load_level(text))
    return tuple(levels)


def get_builtin(level_id: str) -> Level:
    for level in builtin_catalog():
        if level.id == level_id:
            return level
    raise KeyError(level_id)
