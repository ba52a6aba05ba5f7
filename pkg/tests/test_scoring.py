"""Score formulas, star thresholds, time bonus."""

import pytest

from critters.engine import (
    BaseRunResult,
    LoopRunResult,
    score_base,
    score_loop,
    stars,
    time_fraction,
)


def base_result(saved, healthy, detected, mutants, portals=1):
    return BaseRunResult(
        outcomes=(),
        healthy_total=healthy,
        healthy_saved=saved,
        mutant_total=mutants,
        mutant_detected=detected,
        portal_count=portals,
    )


def loop_result(completed, healthy, detected, mutants, penalty=0):
    return LoopRunResult(
        outcomes=(),
        healthy_total=healthy,
        healthy_completed=completed,
        mutant_total=mutants,
        mutant_detected=detected,
        first_effect_rounds={},
        total_penalty=penalty,
    )


class TestScoreBase:
    def test_partial_detection_breakdown(self):
        breakdown = score_base(base_result(10, 10, 8, 15), setup_seconds=0)
        assert [r.points for r in breakdown.components] == [250, 400, 0, 65]
        assert [r.detail for r in breakdown.components] == ["100 %", "53 %", "1", "100 %"]
        assert breakdown.total == 715

    def test_perfect_play_with_fast_setup(self):
        breakdown = score_base(base_result(10, 10, 15, 15, portals=2), setup_seconds=30)
        assert breakdown.total == 1100
        assert breakdown.stars == 3

    def test_nothing_saved_nothing_detected(self):
        breakdown = score_base(base_result(0, 10, 0, 15), setup_seconds=0)
        assert breakdown.total == 0
        assert breakdown.stars == 0

    def test_portal_row_is_informational(self):
        breakdown = score_base(base_result(10, 10, 15, 15, portals=7), setup_seconds=500)
        portal_row = breakdown.components[2]
        assert portal_row.label == "Placed Portals"
        assert portal_row.detail == "7"
        assert portal_row.points == 0

    def test_slow_setup_halves_then_kills_the_bonus(self):
        full = score_base(base_result(10, 10, 15, 15), 30)
        half = score_base(base_result(10, 10, 15, 15), 75)
        none = score_base(base_result(10, 10, 15, 15), 120)
        assert full.components[3].points == 100
        assert half.components[3].points == 50
        assert none.components[3].points == 0

    def test_total_is_the_component_sum(self):
        breakdown = score_base(base_result(7, 10, 9, 15), setup_seconds=44)
        assert breakdown.total == sum(r.points for r in breakdown.components)


class TestTimeFraction:
    @pytest.mark.parametrize("setup,expected", [
        (0, 1), (29.9, 1), (30, 1), (75, 0.5), (120, 0), (500, 0),
    ])
    def test_clamped_linear_window(self, setup, expected):
        assert time_fraction(setup) == expected


class TestScoreLoop:
    def test_perfect_run(self):
        breakdown = score_loop(loop_result(6, 6, 4, 4))
        assert [r.points for r in breakdown.components] == [400, 600, 0]
        assert breakdown.total == 1000
        assert breakdown.stars == 3

    def test_late_detection_penalty_shows_up_negative(self):
        breakdown = score_loop(loop_result(6, 6, 4, 4, penalty=50))
        assert breakdown.components[2].points == -50
        assert breakdown.total == 950

    def test_everyone_sent_back_still_scores_detection(self):
        breakdown = score_loop(loop_result(0, 6, 4, 4))
        assert [r.points for r in breakdown.components] == [0, 600, 0]
        assert breakdown.total == 600

    def test_total_is_clamped_at_zero(self):
        breakdown = score_loop(loop_result(0, 6, 1, 10, penalty=500))
        assert breakdown.total == 0

    def test_no_time_bonus_row(self):
        breakdown = score_loop(loop_result(6, 6, 4, 4))
        assert [r.label for r in breakdown.components] == [
            "Successful collectors",
            "Detected wrong collectors",
            "Penalty for late detection",
        ]


class TestStars:
    @pytest.mark.parametrize("total,expected", [
        (1100, 3), (1000, 3), (999, 2), (800, 2), (799, 1), (500, 1), (499, 0), (0, 0),
    ])
    def test_thresholds(self, total, expected):
        assert stars(total) == expected

    def test_monotone(self):
        values = [stars(total) for total in range(0, 1101, 7)]
        assert values == sorted(values)


def test_penalty_term_per_late_round(loop01, short_test):
    """A mutant first wrong in round 1 but caught in round 3 costs 50 points."""
    from critters.blocklang import AssertEq, AttrRef, Count, Eq, If, Lit
    from critters.engine import SignpostTest, simulate_loop

    lap3_only = (If(Eq(AttrRef("roundsCount"), Lit(Count(3))),
                    (AssertEq(AttrRef("redBerries"), Lit(Count(3))),), ()),)
    result, _ = simulate_loop(loop01, [SignpostTest(0, lap3_only)], seed=1)
    caught = {o.origin: o.position for o in result.outcomes if o.kind == "sent_back"}
    # everyone wrong at lap 3 is caught there; the slacker diverges there too
    assert caught == {"greedy-picker": 3, "empty-handed": 3,
                      "second-round-double": 3, "final-round-slacker": 3}
    # penalties: (3-1) + (3-1) + (3-2) + (3-3) rounds late, at 25 points each
    assert result.total_penalty == 25 * (2 + 2 + 1 + 0)
