"""Finite strategic games, restrictions, beliefs and the game file format."""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence, Union


class GameFormatError(ValueError):
    """Raised on malformed game files; carries the offending line number."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class BudgetExceededError(RuntimeError):
    """An exhaustive enumeration was refused because the instance is too big."""


_RATIONAL_RE = re.compile(r"^[+-]?\d+(?:/[1-9]\d*)?$")


def parse_rational(token, line=None):
    """Parse an integer or p/q token into a Fraction. Decimals are rejected."""
    if not _RATIONAL_RE.match(token):
        raise GameFormatError(f"not an integer or p/q rational: {token!r}", line)
    return Fraction(token)


@dataclass(frozen=True, eq=False)
class Game:
    """An n-player finite strategic game with exact rational payoffs.

    Strategies are interned to dense indices per player; names are kept for
    I/O. Games compare by identity.
    """

    strategy_names: tuple[tuple[str, ...], ...]
    table: Mapping[tuple[int, ...], tuple[Fraction, ...]]

    @property
    def n(self):
        return len(self.strategy_names)

    def strategy_count(self, i):
        return len(self.strategy_names[i])

    def strategies(self, i):
        return range(len(self.strategy_names[i]))

    def name(self, i, s):
        return self.strategy_names[i][s]

    def index(self, i, name):
        try:
            return self.strategy_names[i].index(name)
        except ValueError:
            raise KeyError(f"player {i + 1} has no strategy {name!r}") from None

    def profiles(self):
        return itertools.product(*(self.strategies(i) for i in range(self.n)))

    def payoffs(self, profile):
        return self.table[tuple(profile)]

    def payoff(self, i, profile):
        return self.table[tuple(profile)][i]

    def full_restriction(self):
        return Restriction(self, tuple(frozenset(self.strategies(i)) for i in range(self.n)))

    def empty_restriction(self):
        return Restriction(self, tuple(frozenset() for _ in range(self.n)))

    def restriction(self, sets):
        """Build a restriction from per-player iterables of indices or names."""
        fixed = []
        for i, part in enumerate(sets):
            idx = frozenset(s if isinstance(s, int) else self.index(i, s) for s in part)
            fixed.append(idx)
        return Restriction(self, tuple(fixed))


@dataclass(frozen=True)
class Restriction:
    """A product of per-player strategy subsets of an owning game.

    Restrictions of one game form a lattice under componentwise inclusion.
    """

    game: Game
    sets: tuple[frozenset, ...]

    def __post_init__(self):
        if len(self.sets) != self.game.n:
            raise ValueError("restriction arity does not match game")
        for i, part in enumerate(self.sets):
            for s in part:
                if not 0 <= s < self.game.strategy_count(i):
                    raise ValueError(f"strategy index {s} out of range for player {i + 1}")

    def __iter__(self):
        return iter(self.sets)

    def strategies(self, i):
        return sorted(self.sets[i])

    def is_empty(self):
        return any(not part for part in self.sets)

    def is_full(self):
        return all(len(part) == self.game.strategy_count(i) for i, part in enumerate(self.sets))

    def contains_profile(self, profile):
        return all(s in self.sets[i] for i, s in enumerate(profile))

    def profiles(self):
        return itertools.product(*(self.strategies(i) for i in range(self.game.n)))

    def opponent_profiles(self, i):
        """All joint opponent strategies, as tuples ordered by ascending player, skipping i."""
        parts = [self.strategies(j) for j in range(self.game.n) if j != i]
        return itertools.product(*parts)

    def describe(self):
        g = self.game
        parts = []
        for i, part in enumerate(self.sets):
            names = ",".join(g.name(i, s) for s in sorted(part))
            parts.append("{" + names + "}")
        return " | ".join(parts)


def full_profile(i, s_i, opponents):
    """Reassemble a joint profile from player i's strategy and an opponent tuple."""
    profile = list(opponents)
    profile.insert(i, s_i)
    return tuple(profile)


def restriction_leq(a, b):
    """Componentwise inclusion a <= b."""
    _require_same_game(a, b)
    return all(x <= y for x, y in zip(a.sets, b.sets))


def restriction_meet(restrictions):
    rs = list(restrictions)
    if not rs:
        raise ValueError("meet of no restrictions")
    game = rs[0].game
    for r in rs:
        _require_same_game(rs[0], r)
    sets = tuple(
        frozenset.intersection(*(r.sets[i] for r in rs)) for i in range(game.n)
    )
    return Restriction(game, sets)


def restriction_join(restrictions):
    rs = list(restrictions)
    if not rs:
        raise ValueError("join of no restrictions")
    game = rs[0].game
    for r in rs:
        _require_same_game(rs[0], r)
    sets = tuple(frozenset.union(*(r.sets[i] for r in rs)) for i in range(game.n))
    return Restriction(game, sets)


def _require_same_game(a, b):
    if a.game is not b.game:
        raise ValueError("restrictions belong to different games")


def subsets_of(items):
    """All subsets of a collection as frozensets, smallest first."""
    items = sorted(items)
    for k in range(len(items) + 1):
        for combo in itertools.combinations(items, k):
            yield frozenset(combo)


def all_restrictions(game, budget=None):
    """Every restriction of the game. Guarded: 2^(total strategies) many."""
    total = sum(game.strategy_count(i) for i in range(game.n))
    if budget is not None and total > budget:
        raise BudgetExceededError(
            f"{total} strategies in total exceeds the enumeration budget of {budget}"
        )
    per_player = [list(subsets_of(game.strategies(i))) for i in range(game.n)]
    for sets in itertools.product(*per_player):
        yield Restriction(game, tuple(sets))


# ---------- beliefs ----------


@dataclass(frozen=True, eq=False)
class MixedStrategy:
    """A probability distribution over one player's strategies."""

    game: Game
    player: int
    weights: Mapping[int, Fraction]

    def __post_init__(self):
        total = Fraction(0)
        for s, w in self.weights.items():
            if not 0 <= s < self.game.strategy_count(self.player):
                raise ValueError(f"strategy index {s} out of range")
            if w < 0:
                raise ValueError("negative weight")
            total += w
        if total != 1:
            raise ValueError(f"weights sum to {total}, not 1")

    def support(self):
        return frozenset(s for s, w in self.weights.items() if w > 0)


def point_mass(game, player, s):
    return MixedStrategy(game, player, {s: Fraction(1)})


@dataclass(frozen=True, eq=False)
class CorrelatedBelief:
    """Player i's belief: a joint distribution over opponent strategy tuples."""

    game: Game
    player: int
    weights: Mapping[tuple[int, ...], Fraction]

    def __post_init__(self):
        total = Fraction(0)
        for ctx, w in self.weights.items():
            if len(ctx) != self.game.n - 1:
                raise ValueError("opponent tuple has wrong arity")
            if w < 0:
                raise ValueError("negative weight")
            total += w
        if total != 1:
            raise ValueError(f"weights sum to {total}, not 1")

    def support(self):
        return frozenset(ctx for ctx, w in self.weights.items() if w > 0)


Belief = Union[tuple, Sequence[MixedStrategy], CorrelatedBelief]


def expected_payoff(game, i, s_i, belief):
    """Expected payoff of s_i for player i against a belief.

    The belief is a pure opponent tuple, a sequence of per-opponent mixed
    strategies, or a CorrelatedBelief.
    """
    if isinstance(belief, CorrelatedBelief):
        if belief.player != i:
            raise ValueError("belief held by a different player")
        return sum(
            (w * game.payoff(i, full_profile(i, s_i, ctx)) for ctx, w in belief.weights.items()),
            Fraction(0),
        )
    belief = tuple(belief)
    if belief and isinstance(belief[0], MixedStrategy):
        opponents = [j for j in range(game.n) if j != i]
        if len(belief) != len(opponents):
            raise ValueError("need one mixed strategy per opponent")
        for j, m in zip(opponents, belief):
            if m.player != j:
                raise ValueError("mixed strategies out of player order")
        total = Fraction(0)
        supports = [sorted(m.support()) for m in belief]
        for ctx in itertools.product(*supports):
            w = Fraction(1)
            for m, s in zip(belief, ctx):
                w *= m.weights[s]
            total += w * game.payoff(i, full_profile(i, s_i, ctx))
        return total
    if len(belief) != game.n - 1:
        raise ValueError("opponent tuple has wrong arity")
    return game.payoff(i, full_profile(i, s_i, belief))


# ---------- game file format ----------


def load_game(text):
    """Parse the plain-text game format.

    players <n>, then one strategies line per player, then one payoff line
    per joint profile. '#' starts a comment.
    """
    lines = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.split("#", 1)[0].strip()
        if stripped:
            lines.append((lineno, stripped.split()))
    if not lines:
        raise GameFormatError("empty game file")

    pos = 0
    lineno, toks = lines[pos]
    if toks[0] != "players" or len(toks) != 2:
        raise GameFormatError("expected 'players <n>'", lineno)
    try:
        n = int(toks[1])
    except ValueError:
        raise GameFormatError(f"bad player count {toks[1]!r}", lineno) from None
    if n < 2:
        raise GameFormatError("at least two players required", lineno)
    pos += 1

    names: list[tuple[str, ...]] = []
    for i in range(n):
        if pos >= len(lines):
            raise GameFormatError(f"missing strategies line for player {i + 1}")
        lineno, toks = lines[pos]
        if toks[0] != "strategies" or len(toks) < 3:
            raise GameFormatError(f"expected 'strategies {i + 1} <name>...'", lineno)
        if toks[1] != str(i + 1):
            raise GameFormatError(f"expected strategies for player {i + 1}, got {toks[1]}", lineno)
        player_names = tuple(toks[2:])
        seen = set()
        for nm in player_names:
            if nm in seen:
                raise GameFormatError(f"duplicate strategy {nm!r} for player {i + 1}", lineno)
            seen.add(nm)
        names.append(player_names)
        pos += 1

    index = [{nm: s for s, nm in enumerate(player_names)} for player_names in names]
    table: dict[tuple[int, ...], tuple[Fraction, ...]] = {}
    first_seen: dict[tuple[int, ...], int] = {}
    for lineno, toks in lines[pos:]:
        if toks[0] != "payoff":
            raise GameFormatError(f"unexpected directive {toks[0]!r}", lineno)
        if len(toks) != 1 + 2 * n:
            raise GameFormatError(f"payoff line needs {n} strategies and {n} values", lineno)
        profile = []
        for i, nm in enumerate(toks[1 : 1 + n]):
            if nm not in index[i]:
                raise GameFormatError(f"unknown strategy {nm!r} for player {i + 1}", lineno)
            profile.append(index[i][nm])
        profile = tuple(profile)
        if profile in table:
            raise GameFormatError(
                f"duplicate payoff for profile {' '.join(toks[1 : 1 + n])}"
                f" (first given on line {first_seen[profile]})",
                lineno,
            )
        values = tuple(parse_rational(tok, lineno) for tok in toks[1 + n :])
        table[profile] = values
        first_seen[profile] = lineno

    expected = itertools.product(*(range(len(p)) for p in names))
    for profile in expected:
        if profile not in table:
            shown = " ".join(names[i][s] for i, s in enumerate(profile))
            raise GameFormatError(f"missing payoff for profile {shown}")
    return Game(tuple(names), table)


def load_game_file(path):
    with open(path, "r", encoding="utf-8") as fh:
        return load_game(fh.read())


def game_to_text(game):
    """Serialize a game back into the file format (round-trips with load_game)."""
    out = [f"players {game.n}"]
    for i in range(game.n):
        out.append(f"strategies {i + 1} " + " ".join(game.strategy_names[i]))
    for profile in game.profiles():
        cells = " ".join(game.name(i, s) for i, s in enumerate(profile))
        values = " ".join(str(v) for v in game.payoffs(profile))
        out.append(f"payoff {cells} {values}")
    return "\n".join(out) + "\n"
