"""Block-language values, AST nodes, attribute schemas and critter state.

Everything here is immutable after construction: statement lists are tuples,
attribute maps are copied defensively, and all node classes are frozen
dataclasses.  Values can therefore be shared freely between threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from types import MappingProxyType
from typing import Mapping, Union


COLOR_NAMES = ("red", "orange", "blue", "pink", "green", "purple")

#: Name of the engine-managed lap counter in loop levels.
ROUNDS_ATTR = "roundsCount"


class Terrain(str, Enum):
    GRASS = "grass"
    DIRT = "dirt"
    ICE = "ice"
    WATER = "water"
    WOOD = "wood"


WALKABLE = frozenset({Terrain.GRASS, Terrain.DIRT, Terrain.ICE})

#: Single-character terrain codes used by the level file format.
TERRAIN_CODES = {
    "g": Terrain.GRASS,
    "d": Terrain.DIRT,
    "i": Terrain.ICE,
    "w": Terrain.WATER,
    "o": Terrain.WOOD,
}
TERRAIN_TO_CODE = {t: c for c, t in TERRAIN_CODES.items()}


def walkable(terrain: Terrain) -> bool:
    return terrain in WALKABLE


# ---------------------------------------------------------------------------
# Values
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Color:
    name: str

    def __post_init__(self):
        if self.name not in COLOR_NAMES:
            raise ValueError(f"unknown color {self.name!r}")


@dataclass(frozen=True)
class Count:
    n: int

    def __post_init__(self):
        if not isinstance(self.n, int) or isinstance(self.n, bool) or self.n < 0:
            raise ValueError(f"count must be a non-negative integer, got {self.n!r}")


@dataclass(frozen=True)
class Truth:
    """Result of a comparison.  Never stored in attributes."""

    b: bool


Value = Union[Color, Count, Truth]


def value_to_plain(value: Value):
    """Lossless plain form used in attribute maps and timelines."""
    if isinstance(value, Color):
        return value.name
    if isinstance(value, Count):
        return value.n
    raise ValueError("truth values have no external representation")


def plain_to_value(plain) -> Value:
    if isinstance(plain, str):
        return Color(plain)
    if isinstance(plain, int) and not isinstance(plain, bool):
        return Count(plain)
    raise ValueError(f"cannot interpret {plain!r} as an attribute value")


# ---------------------------------------------------------------------------
# Expressions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Lit:
    value: Value

    def __post_init__(self):
        if isinstance(self.value, Truth):
            raise ValueError("truth values cannot appear as literals")


@dataclass(frozen=True)
class AttrRef:
    name: str


@dataclass(frozen=True)
class TileIs:
    terrain: Terrain


@dataclass(frozen=True)
class Eq:
    lhs: "Expr"
    rhs: "Expr"


Expr = Union[Lit, AttrRef, TileIs, Eq]


# ---------------------------------------------------------------------------
# Statements
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SetAttr:
    name: str
    value: Expr


@dataclass(frozen=True)
class Collect:
    kind: str
    count: int

    def __post_init__(self):
        if not isinstance(self.count, int) or isinstance(self.count, bool) or self.count < 0:
            raise ValueError(f"collect count must be >= 0, got {self.count!r}")


@dataclass(frozen=True)
class If:
    """Conditional statement, shared by behavior and test programs.

    Which statement kinds the branches may hold is a typecheck concern,
    not a structural one.
    """

    cond: Expr
    then: tuple = ()
    orelse: tuple = ()


@dataclass(frozen=True)
class Repeat:
    times: int
    body: tuple = ()

    def __post_init__(self):
        if not isinstance(self.times, int) or isinstance(self.times, bool) or self.times < 1:
            raise ValueError(f"repeat count must be >= 1, got {self.times!r}")


@dataclass(frozen=True)
class AssertEq:
    lhs: Expr
    rhs: Expr


BehaviorStmt = Union[SetAttr, Collect, If, Repeat]
TestStmt = Union[AssertEq, If]
TestProgram = tuple  # tuple of TestStmt


# ---------------------------------------------------------------------------
# Programs
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CritterProgram:
    """Behavior of base-level critters: run once at spawn, then per tile."""

    init: tuple = ()
    on_tile: tuple = ()


@dataclass(frozen=True)
class Recipe:
    """Loop-level collection program: a single top-level repeat."""

    loop: Repeat = field(default_factory=lambda: Repeat(1, ()))


Program = Union[CritterProgram, Recipe]


# ---------------------------------------------------------------------------
# Attribute schema
# ---------------------------------------------------------------------------

def berry_counter_name(kind: str) -> str:
    """Counter attribute that stores berries of ``kind`` (e.g. redBerries)."""
    return f"{kind}Berries"


@dataclass(frozen=True)
class ColorAttr:
    palette: tuple[str, ...]
    initial: str


@dataclass(frozen=True)
class CounterAttr:
    role: str  # "berry" or "rounds"
    kind: str | None = None  # berry kind when role == "berry"


@dataclass(frozen=True)
class AttributeSchema:
    colors: Mapping[str, ColorAttr] = field(default_factory=dict)
    counters: Mapping[str, CounterAttr] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "colors", MappingProxyType(dict(self.colors)))
        object.__setattr__(self, "counters", MappingProxyType(dict(self.counters)))

    def attr_type(self, name: str) -> str | None:
        """Static type of an attribute: "color", "count" or None if unknown."""
        if name in self.colors:
            return "color"
        if name in self.counters:
            return "count"
        return None

    def is_engine_managed(self, name: str) -> bool:
        counter = self.counters.get(name)
        return counter is not None and counter.role == "rounds"

    def berry_kinds(self) -> tuple[str, ...]:
        return tuple(
            c.kind for c in self.counters.values() if c.role == "berry" and c.kind
        )

    def palette(self, name: str) -> tuple[str, ...]:
        return self.colors[name].palette

    def initial_state(self, overrides: Mapping[str, object] | None = None) -> "CritterState":
        """Fresh attribute store: palette defaults and zeroed counters."""
        attrs: dict[str, Value] = {}
        for name, spec in self.colors.items():
            attrs[name] = Color(spec.initial)
        for name in self.counters:
            attrs[name] = Count(0)
        for name, plain in (overrides or {}).items():
            attrs[name] = plain_to_value(plain)
        return CritterState(attrs)


# ---------------------------------------------------------------------------
# Critter state
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CritterState:
    """Attribute store of one critter.

    Position, lap and alive/teleported status live in the simulation, not
    here; this is exactly the data block-language code can observe.
    """

    attrs: Mapping[str, Value]

    def __post_init__(self):
        object.__setattr__(self, "attrs", MappingProxyType(dict(self.attrs)))

    def __eq__(self, other):
        if not isinstance(other, CritterState):
            return NotImplemented
        return dict(self.attrs) == dict(other.attrs)

    def get(self, name: str) -> Value | None:
        return self.attrs.get(name)

    def with_attr(self, name: str, value: Value) -> "CritterState":
        new = dict(self.attrs)
        new[name] = value
        return CritterState(new)

    def to_plain(self) -> dict:
        return {name: value_to_plain(v) for name, v in sorted(self.attrs.items())}
