"""Canonical AST text: round trips, strictness, golden bytes."""

import json

import pytest

from critters.blocklang import (
    AssertEq,
    AttrRef,
    Count,
    Lit,
    emit_ast,
    parse_ast,
)
from critters.blocklang.errors import AstSchemaError, AstSyntaxError
from conftest import golden_text


def test_golden_recipe_round_trips_byte_for_byte(loop01):
    golden = golden_text("loop01_recipe.json").strip()
    assert emit_ast(parse_ast(golden)) == golden
    assert emit_ast(loop01.program) == golden


def test_parse_empty_text_is_a_syntax_error():
    with pytest.raises(AstSyntaxError):
        parse_ast("")


def test_syntax_error_carries_position():
    with pytest.raises(AstSyntaxError) as info:
        parse_ast('{"kind": "attr", }')
    assert info.value.pos is not None


def test_unknown_kind_is_a_schema_error():
    with pytest.raises(AstSchemaError):
        parse_ast('{"kind":"teleportEveryone"}')


def test_extra_keys_are_rejected():
    with pytest.raises(AstSchemaError):
        parse_ast('{"kind":"attr","name":"shirt","bonus":1}')


def test_rounds_equal_four_parses_to_itself():
    golden = golden_text("test_rounds_equal_four.json").strip()
    node = parse_ast(golden)
    assert node == (AssertEq(AttrRef("roundsCount"), Lit(Count(4))),)
    assert parse_ast(emit_ast(node)) == node


@pytest.mark.parametrize("name", [
    "loop01_recipe.json",
    "test_berries_match_rounds.json",
    "test_per_round_checks.json",
    "test_rounds_equal_four.json",
    "test_berry_ladder.json",
    "test_shirt_branches.json",
])
def test_golden_corpus_is_canonical(name):
    """Emission is sorted-key, no-whitespace, and a fixed point."""
    golden = golden_text(name).strip()
    assert emit_ast(parse_ast(golden)) == golden
    assert ": " not in golden and ", " not in golden
    compact = json.dumps(json.loads(golden), sort_keys=True, separators=(",", ":"))
    assert golden == compact


def test_builtin_programs_round_trip(base01, loop01, loop02, loop10):
    for level in (base01, loop01, loop02, loop10):
        text = emit_ast(level.program)
        assert parse_ast(text) == level.program
        assert emit_ast(parse_ast(text)) == text
