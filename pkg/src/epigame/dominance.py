"""Dominance relations and best responses on restrictions of a game.

Contexts come from the opponents' part of a restriction; the comparison and
belief sets are passed explicitly so local and global property variants can
share one implementation.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .games import (
    CorrelatedBelief,
    MixedStrategy,
    expected_payoff,
    full_profile,
    point_mass,
)
from .lp import LinearProgram, Optimal, solve


class BeliefClassError(ValueError):
    """Raised when a belief class is unsupported for the game at hand."""


def _payoff_against(game, i, strategy, ctx):
    if isinstance(strategy, MixedStrategy):
        total = Fraction(0)
        for s, w in strategy.weights.items():
            if w:
                total += w * game.payoff(i, full_profile(i, s, ctx))
        return total
    return game.payoff(i, full_profile(i, strategy, ctx))


def strictly_dominates(game, context, i, dominator, dominated):
    """dominator beats dominated in every joint opponent strategy of the context.

    Vacuously true when the context is empty on the opponents' side.
    """
    return all(
        _payoff_against(game, i, dominator, ctx) > game.payoff(i, full_profile(i, dominated, ctx))
        for ctx in context.opponent_profiles(i)
    )


def weakly_dominates(game, context, i, dominator, dominated):
    """At least as good everywhere and strictly better somewhere in the context."""
    strict = False
    for ctx in context.opponent_profiles(i):
        a = _payoff_against(game, i, dominator, ctx)
        b = game.payoff(i, full_profile(i, dominated, ctx))
        if a < b:
            return False
        if a > b:
            strict = True
    return strict


def mixed_strictly_dominates_exists(game, context, i, support, dominated):
    """Search for a mixed strategy over support strictly dominating dominated.

    Returns the witness MixedStrategy or None. LP: maximize the margin eps
    subject to the mixture beating dominated by eps in every context.
    """
    support = sorted(support)
    if not support:
        raise ValueError("empty support")
    contexts = list(context.opponent_profiles(i))
    if not contexts:
        return point_mass(game, i, support[0])
    k = len(support)
    lp = LinearProgram(k + 1, [Fraction(0)] * k + [Fraction(1)])
    lp.set_bounds(k, None, None)  # eps is free
    for ctx in contexts:
        coeffs = [game.payoff(i, full_profile(i, s, ctx)) for s in support]
        coeffs.append(Fraction(-1))
        lp.add(coeffs, ">=", game.payoff(i, full_profile(i, dominated, ctx)))
    lp.add([Fraction(1)] * k + [Fraction(0)], "=", Fraction(1))
    res = solve(lp)
    if not isinstance(res, Optimal) or res.value <= 0:
        return None
    witness = MixedStrategy(game, i, {s: w for s, w in zip(support, res.point) if w})
    assert strictly_dominates(game, context, i, witness, dominated)
    return witness


def mixed_weakly_dominates_exists(game, context, i, support, dominated):
    """Search for a weakly dominating mixture over support; None if there is none.

    LP over mixture weights plus one slack gap per context: feasibility gives
    'at least as good everywhere', a positive total gap gives 'better somewhere'.
    """
    support = sorted(support)
    if not support:
        raise ValueError("empty support")
    contexts = list(context.opponent_profiles(i))
    if not contexts:
        return None
    k = len(support)
    m = len(contexts)
    lp = LinearProgram(k + m, [Fraction(0)] * k + [Fraction(1)] * m)
    for c, ctx in enumerate(contexts):
        coeffs = [game.payoff(i, full_profile(i, s, ctx)) for s in support]
        coeffs += [Fraction(-1) if c2 == c else Fraction(0) for c2 in range(m)]
        lp.add(coeffs, "=", game.payoff(i, full_profile(i, dominated, ctx)))
    lp.add([Fraction(1)] * k + [Fraction(0)] * m, "=", Fraction(1))
    res = solve(lp)
    if not isinstance(res, Optimal) or res.value <= 0:
        return None
    witness = MixedStrategy(game, i, {s: w for s, w in zip(support, res.point) if w})
    assert weakly_dominates(game, context, i, witness, dominated)
    return witness


def _grid_mixtures(game, player, strategies, denominator_bound):
    """All distributions over strategies with weights of denominator <= bound."""
    strategies = sorted(strategies)
    seen = set()
    for d in range(1, denominator_bound + 1):
        for combo in itertools.combinations_with_replacement(range(len(strategies)), d):
            counts = [combo.count(j) for j in range(len(strategies))]
            weights = tuple(Fraction(c, d) for c in counts)
            if weights in seen:
                continue
            seen.add(weights)
            yield MixedStrategy(
                game, player, {s: w for s, w in zip(strategies, weights) if w}
            )


def is_best_response(game, comparison, beliefs_in, i, s_i, belief_class="pure",
                     grid_denominator=None):
    """Is s_i at least as good as every strategy in comparison_i against some
    belief held in beliefs_in?

    belief_class: 'pure' (joint opponent strategies), 'correlated'
    (distributions over joint opponent strategies), or 'mixed' (independent
    per-opponent mixtures; exact for two players via the correlated reduction,
    otherwise needs grid_denominator and is approximate).
    """
    rivals = [s for s in comparison.strategies(i)]
    contexts = list(beliefs_in.opponent_profiles(i))
    if not contexts:
        return False
    if belief_class == "pure":
        return any(
            all(
                game.payoff(i, full_profile(i, s_i, ctx))
                >= game.payoff(i, full_profile(i, s, ctx))
                for s in rivals
            )
            for ctx in contexts
        )
    if belief_class == "mixed":
        if game.n == 2:
            belief_class = "correlated"
        elif grid_denominator is None:
            raise BeliefClassError(
                "independent mixed beliefs with more than two players: "
                "supply grid_denominator for an approximate grid search"
            )
        else:
            opponents = [j for j in range(game.n) if j != i]
            grids = [
                list(_grid_mixtures(game, j, beliefs_in.strategies(j), grid_denominator))
                for j in opponents
            ]
            for belief in itertools.product(*grids):
                mine = expected_payoff(game, i, s_i, belief)
                if all(mine >= expected_payoff(game, i, s, belief) for s in rivals):
                    return True
            return False
    if belief_class == "correlated":
        m = len(contexts)
        lp = LinearProgram(m, [Fraction(0)] * m)
        for s in rivals:
            coeffs = [
                game.payoff(i, full_profile(i, s_i, ctx))
                - game.payoff(i, full_profile(i, s, ctx))
                for ctx in contexts
            ]
            lp.add(coeffs, ">=", Fraction(0))
        lp.add([Fraction(1)] * m, "=", Fraction(1))
        res = solve(lp)
        if isinstance(res, Optimal):
            belief = CorrelatedBelief(
                game, i, {ctx: w for ctx, w in zip(contexts, res.point) if w}
            )
            mine = expected_payoff(game, i, s_i, belief)
            assert all(mine >= expected_payoff(game, i, s, belief) for s in rivals)
            return True
        return False
    raise BeliefClassError(f"unknown belief class {belief_class!r}")
