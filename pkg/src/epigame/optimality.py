"""Optimality properties: the predicates players use to keep strategies.

A property belongs to one player of one game and is evaluated at a strategy
and a restriction. The eleven builtin names follow the local/global split:
local variants range over the restriction, global ones over the full game.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Optional

from . import dominance
from .games import BudgetExceededError, Restriction, all_restrictions, subsets_of


class NonMonotonicPropertyError(ValueError):
    """A monotone profile was required but a counterexample pair exists."""


@dataclass(eq=False)
class OptimalityProperty:
    name: str
    player: int
    game: object
    evaluator: Callable
    provenance: str = "builtin"

    def holds(self, s_i, restriction):
        if restriction.game is not self.game:
            raise ValueError("restriction belongs to a different game")
        if not 0 <= s_i < self.game.strategy_count(self.player):
            raise ValueError(f"strategy index {s_i} out of range")
        return bool(self.evaluator(s_i, restriction))

    def __repr__(self):
        return f"<{self.name} player {self.player + 1}>"


BUILTIN_NAMES = (
    "sd_l", "sd_g", "msd_l", "msd_g", "wd_l", "wd_g",
    "mwd_l", "mwd_g", "br_l", "br_g", "brc_l",
)

MONOTONE_BUILTINS = ("sd_g", "msd_g", "br_g")


def builtin(game, name, i, belief_class=None, grid_denominator=None):
    """Construct one of the builtin properties for player i."""
    if name not in BUILTIN_NAMES:
        raise ValueError(f"unknown property {name!r}")
    if belief_class is not None and name not in ("br_l", "br_g"):
        raise ValueError(f"{name} does not take a belief class")
    full = game.full_restriction()

    def own(restriction, local):
        return restriction.strategies(i) if local else range(game.strategy_count(i))

    if name in ("sd_l", "sd_g"):
        local = name.endswith("_l")

        def evaluator(s, G):
            return not any(
                dominance.strictly_dominates(game, G, i, d, s) for d in own(G, local)
            )

    elif name in ("wd_l", "wd_g"):
        local = name.endswith("_l")

        def evaluator(s, G):
            return not any(
                dominance.weakly_dominates(game, G, i, d, s) for d in own(G, local)
            )

    elif name in ("msd_l", "msd_g", "mwd_l", "mwd_g"):
        local = name.endswith("_l")
        search = (
            dominance.mixed_strictly_dominates_exists
            if name.startswith("msd")
            else dominance.mixed_weakly_dominates_exists
        )

        def evaluator(s, G):
            support = G.sets[i] if local else frozenset(game.strategies(i))
            if not support:
                return True
            return search(game, G, i, support, s) is None

    elif name in ("br_l", "br_g"):
        comparison_full = name == "br_g"
        cls = belief_class or "pure"

        def evaluator(s, G):
            comparison = full if comparison_full else G
            return dominance.is_best_response(
                game, comparison, G, i, s, cls, grid_denominator
            )

    else:  # brc_l

        def evaluator(s, G):
            return dominance.is_best_response(game, G, G, i, s, "correlated")

    return OptimalityProperty(name, i, game, evaluator)


def profile_named(game, names, belief_class=None, grid_denominator=None):
    """A property per player from one shared name or a per-player list."""
    if isinstance(names, str):
        names = [part.strip() for part in names.split(",")]
    if len(names) == 1:
        names = list(names) * game.n
    if len(names) != game.n:
        raise ValueError(f"expected 1 or {game.n} property names, got {len(names)}")
    return tuple(
        builtin(game, nm, i, belief_class, grid_denominator) for i, nm in enumerate(names)
    )


def constant_property(game, i, value=True, name=None):
    return OptimalityProperty(
        name or f"const_{str(value).lower()}", i, game, lambda s, G: value, "test"
    )


def value_table(prop, budget=10):
    """Property values over every restriction, keyed by (strategy, sets)."""
    game = prop.game
    table = {}
    for G in all_restrictions(game, budget=budget):
        for s in game.strategies(prop.player):
            table[(s, G.sets)] = prop.holds(s, G)
    return table


@dataclass(frozen=True)
class MonotonicityReport:
    monotonic: bool
    counterexample: Optional[tuple] = None  # (s_i, smaller Restriction, larger Restriction)


def is_monotonic_on(prop, budget=10, table=None):
    """Exhaustively check that growing the restriction never loses the property.

    It is enough to check cover pairs (one strategy added), since any
    inclusion is a chain of single additions.
    """
    game = prop.game
    if table is None:
        table = value_table(prop, budget=budget)
    for G in all_restrictions(game, budget=budget):
        for j in range(game.n):
            for extra in game.strategies(j):
                if extra in G.sets[j]:
                    continue
                bigger = tuple(
                    part | {extra} if j2 == j else part for j2, part in enumerate(G.sets)
                )
                for s in game.strategies(prop.player):
                    if table[(s, G.sets)] and not table[(s, bigger)]:
                        return MonotonicityReport(
                            False, (s, G, Restriction(game, bigger))
                        )
    return MonotonicityReport(True)


def require_monotone(profile, budget=10):
    """Guard used by fixpoint machinery; raises with the counterexample."""
    for prop in profile:
        report = is_monotonic_on(prop, budget=budget)
        if not report.monotonic:
            s, small, big = report.counterexample
            raise NonMonotonicPropertyError(
                f"non-monotonic property {prop.name} for player {prop.player + 1}: "
                f"holds at {prop.game.name(prop.player, s)} on {small.describe()} "
                f"but not on {big.describe()}"
            )


@dataclass(frozen=True)
class ConditionAReport:
    independent: bool
    counterexample: Optional[tuple] = None  # (s_i, G, G') differing in own component


def satisfies_condition_A(prop, budget=10, table=None):
    """Does the property ignore the owner's own component of the restriction?"""
    game = prop.game
    i = prop.player
    if table is None:
        table = value_table(prop, budget=budget)
    others = [list(subsets_of(game.strategies(j))) for j in range(game.n) if j != i]
    own_sets = list(subsets_of(game.strategies(i)))
    for ctx in itertools.product(*others):
        def with_own(part):
            sets = list(ctx)
            sets.insert(i, part)
            return tuple(sets)

        for s in game.strategies(i):
            base = table[(s, with_own(own_sets[0]))]
            for part in own_sets[1:]:
                if table[(s, with_own(part))] != base:
                    return ConditionAReport(
                        False,
                        (s, Restriction(game, with_own(own_sets[0])),
                         Restriction(game, with_own(part))),
                    )
    return ConditionAReport(True)


def satisfies_singleton_truth(prop):
    """phi_i(s_i, {s}) must hold at the point restriction of every profile."""
    game = prop.game
    for profile in game.profiles():
        point = Restriction(game, tuple(frozenset([s]) for s in profile))
        if not prop.holds(profile[prop.player], point):
            return False
    return True
