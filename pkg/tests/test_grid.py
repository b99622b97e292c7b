"""Configurations, games, rendering, and the triangle symmetry."""

from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chipsplit.grid import (
    PERMUTATIONS,
    ChipConfiguration,
    Game,
    act,
    act_point,
    act_support,
    apply_game,
    compose,
    config_from_json,
    config_to_json,
    grid_points,
    invert,
    parse,
    render,
)


@st.composite
def configs(draw, d=6, integral=True):
    points = grid_points(d)
    values = st.integers(-5, 5) if integral else st.fractions(min_value=-3, max_value=3, max_denominator=4)
    entries = draw(st.dictionaries(st.sampled_from(points), values, max_size=8))
    return ChipConfiguration(entries, ambient=d)


@st.composite
def games(draw, d=6):
    points = grid_points(d - 1)
    entries = draw(st.dictionaries(st.sampled_from(points), st.integers(-4, 4), max_size=6))
    return Game(entries)


def test_grid_point_counts_and_order():
    assert len(grid_points(4)) == 15
    assert grid_points(1) == [(0, 0), (0, 1), (1, 0)]
    assert grid_points(-1) == []


def test_single_split_from_one_chip():
    start = ChipConfiguration({(0, 0): 1}, ambient=3)
    after = apply_game(start, Game({(0, 0): 1}))
    assert after == ChipConfiguration({(1, 0): 1, (0, 1): 1}, ambient=3)


def test_splitting_three_times_reaches_the_opening_example():
    game = Game({(0, 0): 1, (1, 0): 1, (0, 1): 1})
    result = apply_game(ChipConfiguration.zero(2), game)
    assert result == ChipConfiguration({(0, 0): -1, (2, 0): 1, (1, 1): 2, (0, 2): 1}, ambient=2)
    assert result.is_valid()
    assert result.alternating_top_sum() == 0


def test_moves_past_the_ambient_boundary_are_rejected():
    start = ChipConfiguration.zero(2)
    with pytest.raises(ValueError):
        apply_game(start, Game({(1, 1): 1}))


@settings(max_examples=200, deadline=None)
@given(configs(), games(), games())
def test_games_compose_additively(w, g1, g2):
    played_in_turn = apply_game(apply_game(w, g1), g2)
    played_at_once = apply_game(w, g1 + g2)
    assert played_in_turn == played_at_once


@settings(max_examples=200, deadline=None)
@given(configs(), games())
def test_every_game_is_reversible(w, g):
    assert apply_game(apply_game(w, g), -g) == w


def test_degree_and_supports():
    w = ChipConfiguration({(0, 0): -1, (3, 1): 2, (0, 2): Fraction(1, 2)})
    assert w.degree == 4
    assert w.support == {(0, 0), (3, 1), (0, 2)}
    assert w.positive_support == {(3, 1), (0, 2)}
    assert w.negative_support == {(0, 0)}
    assert not w.is_integral()
    assert ChipConfiguration.zero().degree == -1


def test_validity_notions():
    assert ChipConfiguration({(0, 0): -2, (5, 0): 1}).is_valid()
    assert not ChipConfiguration({(1, 0): -1, (5, 0): 1}).is_valid()
    # A chip in debt deep inside the triangle ruins weak validity.
    middle = ChipConfiguration({(5, 5): -1}, ambient=14)
    assert not middle.is_weakly_valid()
    # But debts in the three depth-four corners are tolerated.
    assert ChipConfiguration({(3, 3): -1}, ambient=14).is_weakly_valid()
    assert ChipConfiguration({(2, 9): -1}, ambient=11).is_weakly_valid()
    assert ChipConfiguration({(9, 2): -1}, ambient=11).is_weakly_valid()
    assert not ChipConfiguration({(4, 7): -1}, ambient=14).is_weakly_valid()


def test_primitive_scaling():
    w = ChipConfiguration({(0, 0): Fraction(-1, 2), (1, 0): Fraction(3, 2)})
    assert w.primitive() == ChipConfiguration({(0, 0): -1, (1, 0): 3})
    assert ChipConfiguration({(0, 0): -4, (1, 1): 6}).primitive() == ChipConfiguration({(0, 0): -2, (1, 1): 3})


def test_point_action_formulas():
    d = 5
    assert act_point("(12)", (2, 1), d) == (1, 2)
    assert act_point("(13)", (2, 1), d) == (2, 1)
    assert act_point("(13)", (5, 0), d) == (0, 0)
    assert act_point("(23)", (2, 1), d) == (2, 2)
    assert act_point("(123)", (1, 0), d) == (4, 1)
    assert act_point("(132)", (1, 0), d) == (0, 4)


@settings(max_examples=150, deadline=None)
@given(st.sampled_from(PERMUTATIONS), st.sampled_from(PERMUTATIONS), st.sampled_from(grid_points(7)))
def test_point_action_respects_composition(sigma, tau, p):
    d = 7
    assert act_point(sigma, act_point(tau, p, d), d) == act_point(compose(sigma, tau), p, d)


@settings(max_examples=100, deadline=None)
@given(st.sampled_from(PERMUTATIONS))
def test_point_action_permutes_the_grid(sigma):
    d = 6
    points = grid_points(d)
    assert sorted(act_point(sigma, p, d) for p in points) == sorted(points)


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(PERMUTATIONS), st.sampled_from(PERMUTATIONS), configs())
def test_config_action_respects_composition(sigma, tau, w):
    assert act(sigma, act(tau, w)) == act(compose(sigma, tau), w)


@settings(max_examples=150, deadline=None)
@given(st.sampled_from(PERMUTATIONS), configs())
def test_config_action_is_invertible_and_moves_supports(sigma, w):
    d = 6
    assert act(invert(sigma), act(sigma, w)) == w
    assert act(sigma, w).support == act_support(sigma, w.support, d)


def test_config_action_signs_by_hand():
    # Even ambient degree: reflecting a top-corner chip to the origin keeps its sign.
    w2 = ChipConfiguration({(2, 0): 1}, ambient=2)
    assert act("(13)", w2) == ChipConfiguration({(0, 0): 1}, ambient=2)
    # Odd ambient degree: the same reflection flips it.
    w3 = ChipConfiguration({(3, 0): 1}, ambient=3)
    assert act("(13)", w3) == ChipConfiguration({(0, 0): -1}, ambient=3)
    # Transposition never introduces signs.
    w = ChipConfiguration({(2, 1): 5, (0, 0): -1}, ambient=3)
    assert act("(12)", w) == ChipConfiguration({(1, 2): 5, (0, 0): -1}, ambient=3)


def test_render_matches_hand_drawn_triangle():
    w = ChipConfiguration({(0, 0): -1, (2, 0): 1, (1, 1): 2, (0, 2): 1}, ambient=2)
    assert render(w) == "1\n· 2\n-1 · 1"
    assert render(w, empty=".") == "1\n. 2\n-1 . 1"
    assert render(ChipConfiguration.zero(0)) == "·"


def test_render_can_pad_to_a_bigger_triangle():
    w = ChipConfiguration({(0, 0): 2})
    assert render(w, d=1) == "·\n2 ·"


def test_parse_accepts_both_empty_markers_and_fractions():
    parsed = parse("·\n1/2 .\n-1 . 3")
    assert parsed == ChipConfiguration({(0, 1): Fraction(1, 2), (0, 0): -1, (2, 0): 3}, ambient=2)


def test_parse_rejects_ragged_rows():
    with pytest.raises(ValueError):
        parse("1\n2 3 4")
    with pytest.raises(ValueError):
        parse("")
    with pytest.raises(ValueError):
        parse("1\nx 2")


@settings(max_examples=150, deadline=None)
@given(configs(integral=False))
def test_render_parse_round_trip(w):
    assert parse(render(w)) == w


@settings(max_examples=150, deadline=None)
@given(configs(integral=False))
def test_json_round_trip(w):
    assert config_from_json(config_to_json(w)) == w


def test_arithmetic_and_scaling():
    a = ChipConfiguration({(0, 0): 1, (1, 0): 2})
    b = ChipConfiguration({(1, 0): -2, (0, 1): 1})
    assert a + b == ChipConfiguration({(0, 0): 1, (0, 1): 1})
    assert a - a == ChipConfiguration.zero()
    assert a.scale(Fraction(1, 2)) == ChipConfiguration({(0, 0): Fraction(1, 2), (1, 0): 1})
    assert a.scale(0) == ChipConfiguration.zero()
