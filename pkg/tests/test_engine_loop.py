"""Loop-level simulation: laps, signposts, crossings, deposits."""

import pytest

from critters.blocklang import parse_ast
from critters.engine import InvalidTestConfigError, SignpostTest, simulate_loop
from conftest import golden_text


def signpost(text_or_nodes):
    nodes = parse_ast(text_or_nodes) if isinstance(text_or_nodes, str) else text_or_nodes
    return [SignpostTest(0, nodes)]


def by_origin(result):
    table = {}
    for outcome in result.outcomes:
        table.setdefault(outcome.origin, []).append(outcome)
    return table


def test_short_test_run(loop01, short_test):
    result, timeline = simulate_loop(loop01, short_test, seed=1)
    outcomes = by_origin(result)
    assert all(o.kind == "completed" and o.position == 3 for o in outcomes["healthy"])
    assert [o.position for o in outcomes["greedy-picker"]] == [1]
    assert [o.position for o in outcomes["second-round-double"]] == [2]
    assert [o.position for o in outcomes["final-round-slacker"]] == [3]
    assert result.total_penalty == 0

    deposits = [e for e in timeline if e.kind == "deposit"]
    assert len(deposits) == 6
    assert all(e.data["totals"] == {"redBerries": 3} for e in deposits)


def test_rounds_equal_four_sends_everyone_back_in_round_one(loop01):
    result, _ = simulate_loop(loop01, signpost(golden_text("test_rounds_equal_four.json")), seed=1)
    assert all(o.kind == "sent_back" and o.position == 1 for o in result.outcomes)
    assert result.healthy_completed == 0
    assert result.mutant_detected == 4


def test_berry_ladder_sends_everyone_back_in_round_one(loop01):
    result, _ = simulate_loop(loop01, signpost(golden_text("test_berry_ladder.json")), seed=1)
    assert all(o.kind == "sent_back" and o.position == 1 for o in result.outcomes)


def test_signpost_sees_k_berries_in_lap_k(loop01):
    """Exhaustive over every healthy collector and every lap."""
    result, timeline = simulate_loop(loop01, [], seed=2)
    healthy = {o.critter_index for o in result.outcomes if o.origin == "healthy"}
    berries = {index: 0 for index in healthy}
    rounds = {index: 0 for index in healthy}
    checked = 0
    for event in timeline:
        if event.critter not in healthy:
            continue
        if event.kind == "attrChange" and event.data["name"] == "roundsCount":
            rounds[event.critter] = event.data["value"]
        elif event.kind == "collect":
            berries[event.critter] += event.data["n"]
        elif event.kind == "testPass":
            assert berries[event.critter] == rounds[event.critter]
            checked += 1
    assert checked == len(healthy) * 3


def test_collect_events_happen_at_the_bush(loop01):
    _, timeline = simulate_loop(loop01, [], seed=2)
    bush = list(loop01.board.bushes[0].pos)
    position = {}
    for event in timeline:
        if event.kind == "move":
            position[event.critter] = event.data["to"]
        elif event.kind == "collect":
            assert position[event.critter] == bush


def test_failed_collectors_leave_at_the_crossing(loop01):
    result, timeline = simulate_loop(
        loop01, signpost(golden_text("test_rounds_equal_four.json")), seed=3)
    crossing = list(loop01.board.crossing)
    position = {}
    exits = 0
    for event in timeline:
        if event.kind == "move":
            position[event.critter] = event.data["to"]
        elif event.kind == "exitCrossing":
            assert position[event.critter] == crossing
            exits += 1
    assert exits == len(result.outcomes)


def test_conservation_of_collectors(loop01, short_test):
    result, _ = simulate_loop(loop01, short_test, seed=9)
    done = sum(1 for o in result.outcomes if o.kind == "completed")
    back = sum(1 for o in result.outcomes if o.kind == "sent_back")
    assert done + back == 10


def test_nested_recipe_deposits(loop10):
    result, timeline = simulate_loop(loop10, [], seed=1)
    healthy = {o.critter_index for o in result.outcomes if o.origin == "healthy"}
    for event in timeline:
        if event.kind == "deposit" and event.critter in healthy:
            assert event.data["totals"] == {"pinkBerries": 2, "redBerries": 4}


def test_branch_recipe_handles_both_shirts(loop02):
    result, timeline = simulate_loop(
        loop02, signpost(golden_text("test_shirt_branches.json")), seed=1)
    assert result.healthy_completed == 6
    assert result.mutant_detected == 4
    assert result.total_penalty == 0
    wrong_basket = [o for o in result.outcomes if o.origin == "second-round-wrong-basket"]
    assert wrong_basket[0].position == 2


def test_unknown_signpost_is_rejected(loop01, short_test):
    with pytest.raises(InvalidTestConfigError) as info:
        simulate_loop(loop01, [SignpostTest(3, short_test[0].test)], seed=0)
    assert any(d.code == "UnknownSignpost" for d in info.value.diagnostics)


def test_duplicate_signpost_tests_are_rejected(loop01, short_test):
    with pytest.raises(InvalidTestConfigError):
        simulate_loop(loop01, [short_test[0], short_test[0]], seed=0)


def test_tile_checks_are_rejected_in_signpost_tests(loop01):
    bad = parse_ast(
        '[{"cond":{"kind":"tileIs","terrain":"dirt"},"else":[],"kind":"if","then":[]}]'
    )
    with pytest.raises(InvalidTestConfigError) as info:
        simulate_loop(loop01, [SignpostTest(0, bad)], seed=0)
    assert any(d.code == "ContextViolation" for d in info.value.diagnostics)
