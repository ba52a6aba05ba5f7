"""Deterministic tick-based simulation of base and loop levels.

A run is fully determined by (level, tests, seed): the roster shuffle uses
a local PRNG, critters never interact, and events are merged in (tick,
spawn-order) order.  Timelines serialize canonically so equality of runs
is equality of bytes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from types import MappingProxyType
from typing import Iterable, Mapping

from . import mutation
from .blocklang import (
    Collected,
    Count,
    ROUNDS_ATTR,
    canonical_json,
    exec_behavior,
    from_jsonable,
    run_test,
    to_jsonable,
    typecheck,
    value_to_plain,
)
from .blocklang.typecheck import Diagnostic, error


class InvalidTestConfigError(Exception):
    """Placements or signpost tests rejected before simulation."""

    def __init__(self, diagnostics):
        super().__init__("; ".join(f"{d.code}: {d.message}" for d in diagnostics))
        self.diagnostics = list(diagnostics)


# ---------------------------------------------------------------------------
# Deterministic shuffling
# ---------------------------------------------------------------------------

_MASK64 = (1 << 64) - 1


def _splitmix64(seed: int):
    state = seed & _MASK64
    while True:
        state = (state + 0x9E3779B97F4A7C15) & _MASK64
        z = state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        yield (z ^ (z >> 31))


def deterministic_shuffle(items: Iterable, seed: int) -> list:
    """Fisher-Yates with a local PRNG; stable across platforms and versions."""
    out = list(items)
    rng = _splitmix64(seed)
    for i in range(len(out) - 1, 0, -1):
        j = next(rng) % (i + 1)
        out[i], out[j] = out[j], out[i]
    return out


# ---------------------------------------------------------------------------
# Roster
# ---------------------------------------------------------------------------

DEFAULT_SPAWN_INTERVAL = 8


@dataclass(frozen=True)
class RosterEntry:
    critter_index: int
    origin: str  # "healthy" or a mutant id
    spawn_tick: int
    attrs: Mapping

    def __post_init__(self):
        object.__setattr__(self, "attrs", MappingProxyType(dict(self.attrs)))

    @property
    def is_mutant(self) -> bool:
        return self.origin != "healthy"


Roster = tuple


def spawn_schedule(level, seed: int) -> Roster:
    """Seed-shuffled spawn order; entry composition is seed-independent."""
    pool = [("healthy", entry.attrs) for entry in level.roster.healthy]
    pool += [(entry.id, entry.attrs) for entry in level.roster.mutants]
    interval = level.roster.spawn_interval
    shuffled = deterministic_shuffle(pool, seed)
    return tuple(
        RosterEntry(critter_index=i, origin=origin, spawn_tick=i * interval, attrs=attrs)
        for i, (origin, attrs) in enumerate(shuffled)
    )


# ---------------------------------------------------------------------------
# Test configurations
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PortalPlacement:
    tile: tuple[int, int]
    test: tuple

    def to_jsonable(self) -> dict:
        return {"tile": list(self.tile), "test": to_jsonable(self.test)}


@dataclass(frozen=True)
class SignpostTest:
    signpost: int
    test: tuple

    def to_jsonable(self) -> dict:
        return {"signpost": self.signpost, "test": to_jsonable(self.test)}


def parse_test_config(level, obj: dict):
    """Read a tests document for the level kind, without validating it."""
    if not isinstance(obj, dict):
        raise InvalidTestConfigError([error("BadTestConfig", "tests document must be an object")])
    try:
        if level.kind == "base":
            portals = obj.get("portals", [])
            return tuple(
                PortalPlacement(tile=(int(p["tile"][0]), int(p["tile"][1])),
                                test=from_jsonable(p["test"]))
                for p in portals
            )
        signposts = obj.get("signposts", [])
        return tuple(
            SignpostTest(signpost=int(s["signpost"]), test=from_jsonable(s["test"]))
            for s in signposts
        )
    except InvalidTestConfigError:
        raise
    except Exception as exc:
        raise InvalidTestConfigError([error("BadTestConfig", str(exc))]) from None


def tests_to_jsonable(tests, kind: str) -> dict:
    items = [t.to_jsonable() for t in tests]
    return {"portals": items} if kind == "base" else {"signposts": items}


def validate_placements(level, placements) -> list[Diagnostic]:
    out: list[Diagnostic] = []
    path_tiles = {tuple(p): i for i, p in enumerate(level.board.path)}
    seen: set[tuple[int, int]] = set()
    for placement in placements:
        tile = tuple(placement.tile)
        if not level.board.in_bounds(tile) or not level.board.is_walkable(tile):
            out.append(error("UnwalkablePortal", f"portal tile {list(tile)} is not walkable"))
        elif tile not in path_tiles:
            out.append(error("PortalOffPath", f"portal tile {list(tile)} is not on the path"))
        elif path_tiles[tile] in (0, len(level.board.path) - 1):
            out.append(error("PortalOnEndpoint", "portals cannot sit on the village or tower"))
        if tile in seen:
            out.append(error("DuplicatePortal", f"two portals on tile {list(tile)}"))
        seen.add(tile)
        out.extend(typecheck(placement.test, level.schema, level.kind))
    return out


def validate_signpost_tests(level, tests) -> list[Diagnostic]:
    out: list[Diagnostic] = []
    seen: set[int] = set()
    count = len(level.board.signposts)
    for item in tests:
        if not 0 <= item.signpost < count:
            out.append(error("UnknownSignpost", f"no signpost {item.signpost} on this board"))
        if item.signpost in seen:
            out.append(error("DuplicateSignpostTest", f"two tests for signpost {item.signpost}"))
        seen.add(item.signpost)
        out.extend(typecheck(item.test, level.schema, level.kind))
    return out


def validate_tests(level, tests) -> list[Diagnostic]:
    if level.kind == "base":
        return validate_placements(level, tests)
    return validate_signpost_tests(level, tests)


# ---------------------------------------------------------------------------
# Events
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Event:
    tick: int
    critter: int
    kind: str
    data: Mapping = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "data", MappingProxyType(dict(self.data)))

    def to_jsonable(self) -> dict:
        out = {"tick": self.tick, "critter": self.critter, "kind": self.kind}
        out.update(self.data)
        return out


@dataclass(frozen=True)
class EventTimeline:
    events: tuple[Event, ...]

    def to_jsonable(self) -> list:
        return [e.to_jsonable() for e in self.events]

    def canonical_text(self) -> str:
        return canonical_json(self.to_jsonable())

    def __iter__(self):
        return iter(self.events)


def _merge_streams(streams: list[list[Event]]) -> EventTimeline:
    tagged = []
    for events in streams:
        for seq, event in enumerate(events):
            tagged.append((event.tick, event.critter, seq, event))
    tagged.sort(key=lambda item: item[:3])
    return EventTimeline(tuple(event for *_key, event in tagged))


# ---------------------------------------------------------------------------
# Results
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CritterOutcome:
    critter_index: int
    origin: str
    kind: str  # reached_tower | teleported | completed | sent_back
    position: int | None = None  # path tile index (base) or round (loop)
    tile: tuple[int, int] | None = None

    def to_jsonable(self) -> dict:
        out = {"critter": self.critter_index, "origin": self.origin, "outcome": self.kind}
        if self.position is not None:
            out["position"] = self.position
        if self.tile is not None:
            out["tile"] = list(self.tile)
        return out


@dataclass(frozen=True)
class BaseRunResult:
    outcomes: tuple[CritterOutcome, ...]
    healthy_total: int
    healthy_saved: int
    mutant_total: int
    mutant_detected: int
    portal_count: int

    @property
    def saved_fraction(self) -> Fraction:
        return Fraction(self.healthy_saved, self.healthy_total) if self.healthy_total else Fraction(0)

    @property
    def detected_fraction(self) -> Fraction:
        return Fraction(self.mutant_detected, self.mutant_total) if self.mutant_total else Fraction(0)

    def to_jsonable(self) -> dict:
        return {
            "detected": self.mutant_detected,
            "healthy": self.healthy_total,
            "mutants": self.mutant_total,
            "outcomes": [o.to_jsonable() for o in self.outcomes],
            "portals": self.portal_count,
            "saved": self.healthy_saved,
        }


@dataclass(frozen=True)
class LoopRunResult:
    outcomes: tuple[CritterOutcome, ...]
    healthy_total: int
    healthy_completed: int
    mutant_total: int
    mutant_detected: int
    first_effect_rounds: Mapping  # mutant id -> first divergence round
    total_penalty: int  # non-negative point total to subtract

    def __post_init__(self):
        object.__setattr__(self, "first_effect_rounds", MappingProxyType(dict(self.first_effect_rounds)))

    @property
    def successful_fraction(self) -> Fraction:
        return Fraction(self.healthy_completed, self.healthy_total) if self.healthy_total else Fraction(0)

    @property
    def detected_fraction(self) -> Fraction:
        return Fraction(self.mutant_detected, self.mutant_total) if self.mutant_total else Fraction(0)

    def to_jsonable(self) -> dict:
        return {
            "completed": self.healthy_completed,
            "detected": self.mutant_detected,
            "firstEffectRounds": dict(sorted(self.first_effect_rounds.items())),
            "healthy": self.healthy_total,
            "mutants": self.mutant_total,
            "outcomes": [o.to_jsonable() for o in self.outcomes],
            "penalty": self.total_penalty,
        }


# ---------------------------------------------------------------------------
# Base simulation
# ---------------------------------------------------------------------------

def _mutant_program(level, mutant_id: str):
    spec = level.mutant_catalog.get(mutant_id)
    return mutation.apply_edits(level.program, spec.edits, level.schema, level.kind)


def simulate_base(level, placements, seed: int, validate: bool = True):
    """Walk every critter from village to tower through the portals.

    Per entered tile, the per-tile behavior code runs first and the portal
    test second; a failing critter teleports away on the spot.
    """
    placements = tuple(placements)
    if validate:
        diagnostics = validate_placements(level, placements)
        if any(d.severity == "error" for d in diagnostics):
            raise InvalidTestConfigError(diagnostics)

    board = level.board
    path = [tuple(p) for p in board.path]
    terrains = board.path_terrains()
    by_tile = {tuple(p.tile): p for p in placements}
    roster = spawn_schedule(level, seed)

    programs = {"healthy": level.program}
    streams: list[list[Event]] = []
    outcomes: list[CritterOutcome] = []
    for entry in roster:
        if entry.origin not in programs:
            programs[entry.origin] = _mutant_program(level, entry.origin)
        program = programs[entry.origin]
        events: list[Event] = []
        tick = entry.spawn_tick
        state = level.schema.initial_state(entry.attrs)
        events.append(Event(tick, entry.critter_index, "spawn",
                            {"at": list(path[0]), "isMutant": entry.is_mutant}))
        state, effects = exec_behavior(program.init, state)
        for effect in effects:
            events.append(Event(tick, entry.critter_index, "attrChange",
                                {"name": effect.name, "value": value_to_plain(effect.value)}))
        outcome = None
        index = 0
        while outcome is None:
            tick += 1
            index += 1
            tile = path[index]
            events.append(Event(tick, entry.critter_index, "move", {"to": list(tile)}))
            state, effects = exec_behavior(program.on_tile, state, terrains[index])
            for effect in effects:
                events.append(Event(tick, entry.critter_index, "attrChange",
                                    {"name": effect.name, "value": value_to_plain(effect.value)}))
            portal = by_tile.get(tile)
            if portal is not None:
                verdict = run_test(portal.test, state, terrains[index])
                if verdict.passed:
                    events.append(Event(tick, entry.critter_index, "testPass", {"site": list(tile)}))
                else:
                    events.append(Event(tick, entry.critter_index, "testFail",
                                        {"site": list(tile),
                                         "assertionPath": list(verdict.failed_assertion_path)}))
                    events.append(Event(tick, entry.critter_index, "teleport", {}))
                    outcome = CritterOutcome(entry.critter_index, entry.origin,
                                             "teleported", position=index, tile=tile)
                    break
            if index == len(path) - 1:
                events.append(Event(tick, entry.critter_index, "reachTower", {}))
                outcome = CritterOutcome(entry.critter_index, entry.origin, "reached_tower")
        streams.append(events)
        outcomes.append(outcome)

    healthy = [o for o in outcomes if o.origin == "healthy"]
    mutants = [o for o in outcomes if o.origin != "healthy"]
    result = BaseRunResult(
        outcomes=tuple(outcomes),
        healthy_total=len(healthy),
        healthy_saved=sum(1 for o in healthy if o.kind == "reached_tower"),
        mutant_total=len(mutants),
        mutant_detected=sum(1 for o in mutants if o.kind == "teleported"),
        portal_count=len(placements),
    )
    return result, _merge_streams(streams)


# ---------------------------------------------------------------------------
# Loop simulation
# ---------------------------------------------------------------------------

def simulate_loop(level, tests, seed: int, validate: bool = True):
    """Send every collector around the cycle for its recipe's rounds.

    The lap counter bumps at lap start and the whole lap body runs before
    the signpost; a failing collector leaves the board at the crossing.
    """
    tests = tuple(tests)
    if validate:
        diagnostics = validate_signpost_tests(level, tests)
        if any(d.severity == "error" for d in diagnostics):
            raise InvalidTestConfigError(diagnostics)

    board = level.board
    path = [tuple(p) for p in board.path]
    cycle_len = len(path)
    signpost_at = {tuple(pos): sid for sid, pos in enumerate(board.signposts)}
    test_by_signpost = {t.signpost: t.test for t in tests}
    bushes_at: dict[tuple[int, int], str] = {tuple(b.pos): b.kind for b in board.bushes}
    crossing = tuple(board.crossing)
    roster = spawn_schedule(level, seed)

    programs = {"healthy": level.program}
    divergences: dict[str, int | None] = {}
    streams: list[list[Event]] = []
    outcomes: list[CritterOutcome] = []

    for entry in roster:
        if entry.origin not in programs:
            programs[entry.origin] = _mutant_program(level, entry.origin)
        program = programs[entry.origin]
        laps = program.loop.times
        events: list[Event] = []
        tick = entry.spawn_tick
        state = level.schema.initial_state(entry.attrs)
        events.append(Event(tick, entry.critter_index, "spawn",
                            {"at": list(path[0]), "isMutant": entry.is_mutant}))
        pending: dict[str, list[int]] = {}

        def start_lap(lap: int):
            nonlocal state
            state = state.with_attr(ROUNDS_ATTR, Count(lap))
            events.append(Event(tick, entry.critter_index, "attrChange",
                                {"name": ROUNDS_ATTR, "value": lap}))
            new_state, effects = exec_behavior(program.loop.body, state)
            state = new_state
            for effect in effects:
                if isinstance(effect, Collected):
                    pending.setdefault(effect.kind, []).append(effect.n)
                else:
                    events.append(Event(tick, entry.critter_index, "attrChange",
                                        {"name": effect.name, "value": value_to_plain(effect.value)}))

        lap = 1
        start_lap(lap)
        outcome = None
        failing_round: int | None = None
        position = 0
        while outcome is None:
            tick += 1
            position = (position + 1) % cycle_len
            tile = path[position]
            events.append(Event(tick, entry.critter_index, "move", {"to": list(tile)}))
            if failing_round is not None:
                if tile == crossing:
                    events.append(Event(tick, entry.critter_index, "exitCrossing",
                                        {"round": failing_round}))
                    outcome = CritterOutcome(entry.critter_index, entry.origin,
                                             "sent_back", position=failing_round)
                continue
            kind = bushes_at.get(tile)
            if kind is not None and pending.get(kind):
                for n in pending.pop(kind):
                    events.append(Event(tick, entry.critter_index, "collect",
                                        {"berry": kind, "n": n}))
            signpost = signpost_at.get(tile)
            if signpost is not None:
                verdict = run_test(test_by_signpost.get(signpost, ()), state)
                if verdict.passed:
                    events.append(Event(tick, entry.critter_index, "testPass", {"site": signpost}))
                else:
                    events.append(Event(tick, entry.critter_index, "testFail",
                                        {"site": signpost,
                                         "assertionPath": list(verdict.failed_assertion_path)}))
                    failing_round = lap
                continue
            if position == 0:
                if lap == laps:
                    totals = {
                        name: value_to_plain(state.get(name))
                        for name, counter in sorted(level.schema.counters.items())
                        if counter.role == "berry"
                    }
                    events.append(Event(tick, entry.critter_index, "deposit", {"totals": totals}))
                    outcome = CritterOutcome(entry.critter_index, entry.origin,
                                             "completed", position=laps)
                else:
                    lap += 1
                    start_lap(lap)
        streams.append(events)
        outcomes.append(outcome)

        if entry.is_mutant and entry.origin not in divergences:
            spec = level.mutant_catalog.get(entry.origin)
            divergence = mutation.first_divergence(level, spec, dict(entry.attrs))
            divergences[entry.origin] = divergence.round if divergence else None

    healthy = [o for o in outcomes if o.origin == "healthy"]
    mutants = [o for o in outcomes if o.origin != "healthy"]
    penalty = 0
    for outcome in mutants:
        if outcome.kind != "sent_back":
            continue
        first_effect = divergences.get(outcome.origin)
        if first_effect is not None:
            penalty += max(0, outcome.position - first_effect)
    result = LoopRunResult(
        outcomes=tuple(outcomes),
        healthy_total=len(healthy),
        healthy_completed=sum(1 for o in healthy if o.kind == "completed"),
        mutant_total=len(mutants),
        mutant_detected=sum(1 for o in mutants if o.kind == "sent_back"),
        first_effect_rounds=divergences,
        total_penalty=25 * penalty,
    )
    return result, _merge_streams(streams)


def simulate(level, tests, seed: int, validate: bool = True):
    if level.kind == "base":
        return simulate_base(level, tests, seed, validate)
    return simulate_loop(level, tests, seed, validate)


# ---------------------------------------------------------------------------
# Scoring
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ScoreConfig:
    saved_weight: int = 250
    detected_weight: int = 750
    success_weight: int = 400
    loop_detected_weight: int = 600
    penalty_per_round: int = 25
    bonus_rate: Fraction = Fraction(1, 10)
    t_full: float = 30.0
    t_zero: float = 120.0
    star_thresholds: tuple[int, int, int] = (1000, 800, 500)


DEFAULT_SCORE_CONFIG = ScoreConfig()


@dataclass(frozen=True)
class ScoreRow:
    label: str
    detail: str
    points: int

    def to_jsonable(self) -> dict:
        return {"detail": self.detail, "label": self.label, "points": self.points}


@dataclass(frozen=True)
class ScoreBreakdown:
    components: tuple[ScoreRow, ...]
    total: int
    stars: int

    def to_jsonable(self) -> dict:
        return {
            "components": [row.to_jsonable() for row in self.components],
            "stars": self.stars,
            "total": self.total,
        }


def _round_points(value) -> int:
    """Round half up; scores are never negative mid-formula."""
    f = Fraction(value) + Fraction(1, 2)
    return f.numerator // f.denominator


def _percent(fraction) -> str:
    return f"{_round_points(fraction * 100)} %"


def stars(total: int, cfg: ScoreConfig = DEFAULT_SCORE_CONFIG) -> int:
    """0 to 3 stars; monotone in the total."""
    three, two, one = cfg.star_thresholds
    if total >= three:
        return 3
    if total >= two:
        return 2
    if total >= one:
        return 1
    return 0


def time_fraction(setup_seconds: float, cfg: ScoreConfig = DEFAULT_SCORE_CONFIG) -> Fraction:
    """Share of the speed bonus still available after the setup phase."""
    span = Fraction(cfg.t_zero - cfg.t_full)
    left = Fraction(cfg.t_zero) - Fraction(setup_seconds)
    return max(Fraction(0), min(Fraction(1), left / span))


def score_base(result: BaseRunResult, setup_seconds: float,
               cfg: ScoreConfig = DEFAULT_SCORE_CONFIG) -> ScoreBreakdown:
    saved_points = _round_points(cfg.saved_weight * result.saved_fraction)
    detected_points = _round_points(cfg.detected_weight * result.detected_fraction)
    base = saved_points + detected_points
    bonus_share = time_fraction(setup_seconds, cfg)
    bonus = _round_points(cfg.bonus_rate * base * bonus_share)
    total = base + bonus
    rows = (
        ScoreRow("Saved Humans", _percent(result.saved_fraction), saved_points),
        ScoreRow("Detected Mutants", _percent(result.detected_fraction), detected_points),
        ScoreRow("Placed Portals", str(result.portal_count), 0),
        ScoreRow("Time Bonus", _percent(bonus_share), bonus),
    )
    return ScoreBreakdown(components=rows, total=total, stars=stars(total, cfg))


def score_loop(result: LoopRunResult, cfg: ScoreConfig = DEFAULT_SCORE_CONFIG) -> ScoreBreakdown:
    success_points = _round_points(cfg.success_weight * result.successful_fraction)
    detected_points = _round_points(cfg.loop_detected_weight * result.detected_fraction)
    penalty = result.total_penalty
    total = max(0, success_points + detected_points - penalty)
    rows = (
        ScoreRow("Successful collectors", _percent(result.successful_fraction), success_points),
        ScoreRow("Detected wrong collectors", _percent(result.detected_fraction), detected_points),
        ScoreRow("Penalty for late detection", "", -penalty),
    )
    return ScoreBreakdown(components=rows, total=total, stars=stars(total, cfg))


def score_run(level, result, setup_seconds: float = 0.0,
              cfg: ScoreConfig = DEFAULT_SCORE_CONFIG) -> ScoreBreakdown:
    if level.kind == "base":
        return score_base(result, setup_seconds, cfg)
    return score_loop(result, cfg)


# ---------------------------------------------------------------------------
# Replay verification
# ---------------------------------------------------------------------------

def verify_timeline(level, tests, seed: int, timeline) -> bool:
    """True iff the timeline matches a fresh run byte for byte.

    ``timeline`` may be an EventTimeline or already-parsed JSON data; both
    are canonicalized before comparison.
    """
    try:
        _result, fresh = simulate(level, tests, seed)
    except InvalidTestConfigError:
        return False
    if isinstance(timeline, EventTimeline):
        given = timeline.canonical_text()
    else:
        given = canonical_json(timeline)
    return given == fresh.canonical_text()
