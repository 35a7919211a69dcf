"""Dominance relations and best responses against the bundled games."""

import random
from fractions import Fraction
from pathlib import Path

import pytest

from epigame.checks import CheckConfig, random_game
from epigame.dominance import (
    BeliefClassError,
    is_best_response,
    mixed_strictly_dominates_exists,
    mixed_weakly_dominates_exists,
    strictly_dominates,
    weakly_dominates,
)
from epigame.games import load_game_file, point_mass

DATA = Path(__file__).resolve().parents[1] / "data"

PD = load_game_file(DATA / "pd.game")
TBT = load_game_file(DATA / "threebytwo.game")
WDW = load_game_file(DATA / "wd_witness.game")


def test_pd_defect_dominates():
    full = PD.full_restriction()
    for i in range(2):
        assert strictly_dominates(PD, full, i, 1, 0)
        assert weakly_dominates(PD, full, i, 1, 0)
        assert not strictly_dominates(PD, full, i, 0, 1)


def test_no_self_domination_on_nonempty_context():
    full = PD.full_restriction()
    assert not strictly_dominates(PD, full, 0, 1, 1)
    assert not weakly_dominates(PD, full, 0, 1, 1)


def test_threebytwo_needs_a_mixture():
    """B loses to the even mix of T and M but to neither pure strategy."""
    full = TBT.full_restriction()
    B = TBT.index(0, "B")
    for pure in (TBT.index(0, "T"), TBT.index(0, "M")):
        assert not strictly_dominates(TBT, full, 0, pure, B)
        assert not weakly_dominates(TBT, full, 0, pure, B)
    witness = mixed_strictly_dominates_exists(TBT, full, 0, full.sets[0], B)
    assert witness is not None
    assert witness.support() <= {TBT.index(0, "T"), TBT.index(0, "M")}
    assert sum(witness.weights.values()) == 1
    assert strictly_dominates(TBT, full, 0, witness, B)


def test_mixture_search_can_fail():
    full = TBT.full_restriction()
    T = TBT.index(0, "T")
    # nothing dominates T, and mixtures over {B} alone cannot beat it either
    assert mixed_strictly_dominates_exists(TBT, full, 0, full.sets[0], T) is None
    assert mixed_strictly_dominates_exists(TBT, full, 0, {TBT.index(0, "B")}, T) is None
    with pytest.raises(ValueError):
        mixed_strictly_dominates_exists(TBT, full, 0, frozenset(), T)


def test_weak_dominance_witness_game():
    full = WDW.full_restriction()
    a, b = WDW.index(0, "a"), WDW.index(0, "b")
    assert weakly_dominates(WDW, full, 0, b, a)
    assert not strictly_dominates(WDW, full, 0, b, a)
    witness = mixed_weakly_dominates_exists(WDW, full, 0, full.sets[0], a)
    assert witness is not None
    assert weakly_dominates(WDW, full, 0, witness, a)
    # in the single-column context the two rows tie, so weak dominance is gone
    small = WDW.restriction([["a", "b"], ["c"]])
    assert not weakly_dominates(WDW, small, 0, b, a)
    assert mixed_weakly_dominates_exists(WDW, small, 0, full.sets[0], a) is None


def test_empty_opponent_context_conventions():
    empty = PD.restriction([["C", "D"], []])
    assert strictly_dominates(PD, empty, 0, 0, 1)  # vacuously
    assert not weakly_dominates(PD, empty, 0, 0, 1)
    assert mixed_strictly_dominates_exists(PD, empty, 0, empty.sets[0], 0) is not None
    assert mixed_weakly_dominates_exists(PD, empty, 0, empty.sets[0], 0) is None
    assert not is_best_response(PD, PD.full_restriction(), empty, 0, 1)


# ---------- best responses ----------


def test_pd_best_responses():
    full = PD.full_restriction()
    assert is_best_response(PD, full, full, 0, 1)
    assert not is_best_response(PD, full, full, 0, 0)


def test_pure_point_mass_agreement():
    """A strategy justified by a pure belief is justified by its point mass."""
    rng = random.Random(7)
    cfg = CheckConfig(count=0, max_players=2, max_strategies=3)
    for _ in range(20):
        game = random_game(rng, cfg, n=2)
        full = game.full_restriction()
        for i in range(2):
            for s in game.strategies(i):
                pure = is_best_response(game, full, full, i, s, "pure")
                correlated = is_best_response(game, full, full, i, s, "correlated")
                mixed = is_best_response(game, full, full, i, s, "mixed")
                if pure:
                    assert correlated
                assert mixed == correlated  # two players: exact reduction


def test_grid_beliefs_are_sound_for_three_players():
    rng = random.Random(11)
    cfg = CheckConfig(count=0, max_strategies=2)
    for _ in range(10):
        game = random_game(rng, cfg, n=3)
        full = game.full_restriction()
        for i in range(3):
            for s in game.strategies(i):
                gridded = is_best_response(
                    game, full, full, i, s, "mixed", grid_denominator=3
                )
                if gridded:
                    # grid mixtures are product distributions, hence correlated
                    assert is_best_response(game, full, full, i, s, "correlated")


def test_mixed_three_players_needs_grid():
    game = random_game(random.Random(0), CheckConfig(count=0), n=3)
    full = game.full_restriction()
    with pytest.raises(BeliefClassError):
        is_best_response(game, full, full, 0, 0, "mixed")


def test_unknown_belief_class():
    full = PD.full_restriction()
    with pytest.raises(BeliefClassError):
        is_best_response(PD, full, full, 0, 0, "psychic")


def test_strict_implies_weak_on_random_games():
    rng = random.Random(3)
    cfg = CheckConfig(count=0, max_players=3, max_strategies=3)
    for _ in range(25):
        game = random_game(rng, cfg)
        full = game.full_restriction()
        for i in range(game.n):
            for d in game.strategies(i):
                for s in game.strategies(i):
                    if strictly_dominates(game, full, i, d, s):
                        assert weakly_dominates(game, full, i, d, s)


def test_mixture_generalizes_pure_domination():
    rng = random.Random(5)
    cfg = CheckConfig(count=0, max_players=2, max_strategies=3)
    for _ in range(15):
        game = random_game(rng, cfg, n=2)
        full = game.full_restriction()
        for i in range(2):
            for d in game.strategies(i):
                for s in game.strategies(i):
                    if s != d and strictly_dominates(game, full, i, d, s):
                        found = mixed_strictly_dominates_exists(
                            game, full, i, full.sets[i], s
                        )
                        assert found is not None


def test_point_mass_dominator_matches_pure():
    full = PD.full_restriction()
    assert strictly_dominates(PD, full, 0, point_mass(PD, 0, 1), 0)
    assert not strictly_dominates(PD, full, 0, point_mass(PD, 0, 0), 1)
