"""Static checking rules: types, contexts, palettes."""

from critters.blocklang import (
    AssertEq,
    AttrRef,
    AttributeSchema,
    Collect,
    Color,
    ColorAttr,
    Count,
    CounterAttr,
    CritterProgram,
    Eq,
    If,
    Lit,
    Recipe,
    Repeat,
    SetAttr,
    Terrain,
    TileIs,
    typecheck,
)
from critters.blocklang.typecheck import (
    BASE,
    CONTEXT_VIOLATION,
    ENGINE_ATTRIBUTE,
    LOOP,
    PALETTE_VIOLATION,
    TYPE_MISMATCH,
    UNKNOWN_ATTRIBUTE,
    UNKNOWN_BERRY,
)

BASE_SCHEMA = AttributeSchema(
    colors={"shirt": ColorAttr(palette=("red", "orange"), initial="red")},
)
LOOP_SCHEMA = AttributeSchema(
    counters={
        "redBerries": CounterAttr(role="berry", kind="red"),
        "roundsCount": CounterAttr(role="rounds"),
    },
)


def codes(diagnostics):
    return [d.code for d in diagnostics]


def test_color_count_comparison_is_a_type_error():
    test = (AssertEq(AttrRef("shirt"), Lit(Count(3))),)
    assert codes(typecheck(test, BASE_SCHEMA, BASE)) == [TYPE_MISMATCH]


def test_unknown_attribute_reported_with_path():
    test = (AssertEq(AttrRef("hat"), Lit(Color("red"))),)
    diags = typecheck(test, BASE_SCHEMA, BASE)
    assert codes(diags) == [UNKNOWN_ATTRIBUTE]
    assert diags[0].path == (0, 0)


# Context rule table: where each construct is allowed.
def test_repeat_is_rejected_in_base_behavior():
    program = CritterProgram(init=(Repeat(2, ()),))
    assert CONTEXT_VIOLATION in codes(typecheck(program, BASE_SCHEMA, BASE))


def test_collect_is_rejected_in_base_behavior():
    program = CritterProgram(on_tile=(Collect("red", 1),))
    assert CONTEXT_VIOLATION in codes(typecheck(program, BASE_SCHEMA, BASE))


def test_tile_check_is_rejected_in_init_code():
    program = CritterProgram(
        init=(If(TileIs(Terrain.DIRT), (), ()),),
        on_tile=(If(TileIs(Terrain.DIRT), (), ()),),
    )
    diags = typecheck(program, BASE_SCHEMA, BASE)
    assert codes(diags) == [CONTEXT_VIOLATION]
    assert diags[0].path == (0, 0, 0)  # only the init occurrence


def test_tile_check_is_rejected_in_loop_tests():
    test = (If(TileIs(Terrain.DIRT), (), ()),)
    assert CONTEXT_VIOLATION in codes(typecheck(test, LOOP_SCHEMA, LOOP))


def test_tile_check_is_fine_in_base_tests():
    test = (If(TileIs(Terrain.DIRT), (AssertEq(AttrRef("shirt"), Lit(Color("red"))),), ()),)
    assert typecheck(test, BASE_SCHEMA, BASE) == []


def test_recipe_in_base_context_is_a_context_violation():
    recipe = Recipe(Repeat(3, (Collect("red", 1),)))
    assert CONTEXT_VIOLATION in codes(typecheck(recipe, LOOP_SCHEMA, BASE))


def test_rounds_counter_cannot_be_assigned():
    recipe = Recipe(Repeat(1, (SetAttr("roundsCount", Lit(Count(0))),)))
    assert ENGINE_ATTRIBUTE in codes(typecheck(recipe, LOOP_SCHEMA, LOOP))


def test_collect_of_undeclared_berry_kind():
    recipe = Recipe(Repeat(1, (Collect("golden", 1),)))
    assert UNKNOWN_BERRY in codes(typecheck(recipe, LOOP_SCHEMA, LOOP))


def test_palette_violation_on_out_of_palette_literal():
    program = CritterProgram(init=(SetAttr("shirt", Lit(Color("purple"))),))
    assert PALETTE_VIOLATION in codes(typecheck(program, BASE_SCHEMA, BASE))


def test_condition_must_be_a_comparison():
    program = CritterProgram(init=(If(Lit(Color("red")), (), ()),))
    assert TYPE_MISMATCH in codes(typecheck(program, BASE_SCHEMA, BASE))


def test_nested_comparisons_are_rejected():
    inner = Eq(AttrRef("shirt"), Lit(Color("red")))
    test = (AssertEq(inner, Lit(Color("red"))),)
    assert TYPE_MISMATCH in codes(typecheck(test, BASE_SCHEMA, BASE))


def test_clean_loop_test_has_no_diagnostics(loop01):
    test = (AssertEq(AttrRef("redBerries"), AttrRef("roundsCount")),)
    assert typecheck(test, loop01.schema, LOOP) == []


def test_builtin_programs_are_clean(base01, loop01, loop02, loop10):
    for level in (base01, loop01, loop02, loop10):
        assert typecheck(level.program, level.schema, level.kind) == []
