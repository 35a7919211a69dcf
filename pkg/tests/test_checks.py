"""The randomized cross-check registry and counterexample replay."""

import random

import pytest

from epigame.checks import (
    CHECK_POOLS,
    CHECKS,
    SUITES,
    CheckConfig,
    _inclusion_payload,
    _model_payload,
    _restore_model,
    random_bare_model,
    random_game,
    random_positive_body,
    run_check,
    run_suite,
    verify_counterexample,
)
from epigame.epistemic import EpistemicModel
from epigame.games import game_to_text, load_game
from epigame.logic import var_positive
from epigame.optimality import BUILTIN_NAMES

WDW_TEXT = """players 2
strategies 1 a b
strategies 2 c d
payoff a c 0 0
payoff a d 0 0
payoff b c 0 0
payoff b d 1 0
"""


def test_registry_is_consistent():
    assert set(SUITES["all"]) == set(CHECKS)
    for suite, names in SUITES.items():
        for name in names:
            assert name in CHECKS, (suite, name)
    for name, pool in CHECK_POOLS.items():
        assert name in CHECKS
        assert set(pool) <= set(BUILTIN_NAMES)


def test_run_check_unknown_name():
    with pytest.raises(KeyError):
        run_check("nope", CheckConfig())
    with pytest.raises(KeyError):
        run_suite("nope", CheckConfig())


def test_a_sample_of_checks_passes():
    cfg = CheckConfig(seed=5, count=3)
    for name in ("just_chain", "gfp_characterizations", "derivation_valid"):
        result = run_check(name, cfg)
        assert result.passed, (name, result.detail)
        assert result.instances >= 3 or name == "derivation_valid"


def test_checks_are_deterministic():
    cfg = CheckConfig(seed=9, count=4)
    assert run_check("survival_formula", cfg) == run_check("survival_formula", cfg)


def test_parallel_run_matches_serial():
    cfg = CheckConfig(seed=2, count=3)
    serial = run_suite("epist1", cfg, jobs=1)
    parallel = run_suite("epist1", cfg, jobs=2)
    assert serial == parallel


def test_property_override_narrows_the_pool():
    cfg = CheckConfig(seed=0, count=4, properties=("sd_g",))
    assert run_check("epist1_knowledge", cfg).passed


# ---------- counterexample payloads ----------


def test_model_payload_round_trip():
    rng = random.Random(6)
    game = random_game(rng, CheckConfig(count=0), n=2)
    model = random_bare_model(rng, game)
    restored = _restore_model(game, _model_payload(model))
    assert restored.state_names == model.state_names
    assert restored.assignment == model.assignment
    assert restored.correspondences is None


def _violating_payload():
    """wd_g is not monotone, so common knowledge of wd_g-rationality can keep
    a strategy the elimination wipes out."""
    game = load_game(WDW_TEXT)
    model = EpistemicModel(
        game,
        ("w",),
        ((game.index(0, "a"),), (game.index(1, "c"),)),
        ((frozenset({0}),), (frozenset({0}),)),
    )
    return _inclusion_payload(
        game, model, ["wd_g", "wd_g"], ["wd_g", "wd_g"], "knowledge"
    )


def test_verify_counterexample_reproduces_a_violation():
    payload = _violating_payload()
    assert verify_counterexample(payload)


def test_verify_counterexample_rejects_a_non_violation():
    payload = _violating_payload()
    # the same model poses no threat to the monotone sd_g outcome
    payload["rat"] = ["sd_g", "sd_g"]
    payload["outcome"] = ["sd_g", "sd_g"]
    assert not verify_counterexample(payload)


def test_verify_counterexample_unknown_claim():
    with pytest.raises(ValueError):
        verify_counterexample({"claim": "sorcery", "game": WDW_TEXT})


# ---------- random instance helpers ----------


def test_random_game_respects_bounds():
    rng = random.Random(1)
    cfg = CheckConfig(count=0, max_players=3, max_strategies=4, budget=10)
    for _ in range(30):
        game = random_game(rng, cfg)
        assert 2 <= game.n <= 3
        total = sum(game.strategy_count(i) for i in range(game.n))
        assert total <= cfg.budget
        assert all(
            2 <= game.strategy_count(i) <= 4 for i in range(game.n)
        )


def test_lp_heavy_games_stay_small():
    rng = random.Random(2)
    cfg = CheckConfig(count=0)
    for _ in range(10):
        game = random_game(rng, cfg, n=2, lp_heavy=True)
        assert max(game.strategy_count(i) for i in range(2)) <= 3
        game = random_game(rng, cfg, n=3, lp_heavy=True)
        assert max(game.strategy_count(i) for i in range(3)) <= 2


def test_random_positive_bodies_are_positive():
    rng = random.Random(3)
    game = load_game(WDW_TEXT)
    for _ in range(50):
        assert var_positive(random_positive_body(rng, game))


def test_game_text_round_trip_of_random_games():
    rng = random.Random(4)
    cfg = CheckConfig(count=0)
    for _ in range(10):
        game = random_game(rng, cfg)
        again = load_game(game_to_text(game))
        assert again.strategy_names == game.strategy_names
        assert again.table == game.table
