"""Epistemic models over a game: states, strategy assignments, beliefs.

Events are frozensets of state indices. A model may carry possibility
correspondences for every player (belief or knowledge level) or none at all
(bare level). The theorem checkers at the bottom tie common belief of
rationality to the elimination outcome.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from typing import Optional

from .games import BudgetExceededError, Restriction, load_game_file, subsets_of
from .operators import iterate_to_outcome
from .optimality import require_monotone, satisfies_singleton_truth


class ModelFormatError(ValueError):
    """Raised on malformed model files; carries the offending line number."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


LEVELS = ("bare", "belief", "knowledge")


@dataclass(frozen=True, eq=False)
class EpistemicModel:
    game: object
    state_names: tuple
    assignment: tuple  # assignment[i][w] -> strategy index of player i at state w
    correspondences: Optional[tuple] = None  # correspondences[i][w] -> frozenset

    @property
    def num_states(self):
        return len(self.state_names)

    def states(self):
        return range(len(self.state_names))

    def all_event(self):
        return frozenset(self.states())

    def strategy_of(self, i, w):
        return self.assignment[i][w]

    def profile_of(self, w):
        return tuple(self.assignment[i][w] for i in range(self.game.n))

    def P(self, i, w):
        if self.correspondences is None:
            raise ValueError("model has no possibility correspondences")
        return self.correspondences[i][w]

    def state_index(self, name):
        try:
            return self.state_names.index(name)
        except ValueError:
            raise KeyError(f"no state named {name!r}") from None


def validate(model, level):
    """Violations of the requested level; empty list means the model is fine."""
    if level not in LEVELS:
        raise ValueError(f"unknown level {level!r}")
    problems = []
    if level == "bare":
        return problems
    if model.correspondences is None:
        return [f"level {level} requires possibility correspondences"]
    for i in range(model.game.n):
        for w in model.states():
            block = model.P(i, w)
            if not block:
                problems.append(f"P_{i + 1}({model.state_names[w]}) is empty")
                continue
            for w2 in block:
                if model.P(i, w2) != block:
                    problems.append(
                        f"P_{i + 1} not introspective at {model.state_names[w]}: "
                        f"P_{i + 1}({model.state_names[w2]}) differs"
                    )
                    break
            if level == "knowledge" and w not in block:
                problems.append(
                    f"P_{i + 1}({model.state_names[w]}) does not contain the state itself"
                )
    return problems


# ---------- event operators ----------


def box(model, event, player=None):
    """States where the player (or, by default, everyone) believes the event."""
    players = range(model.game.n) if player is None else [player]
    return frozenset(
        w for w in model.states() if all(model.P(i, w) <= event for i in players)
    )


def common_box(model, event):
    """Common belief of an event: intersect the box-powers for |states| rounds."""
    acc = model.all_event()
    power = frozenset(event)
    seen = set()
    for _ in range(model.num_states):
        power = box(model, power)
        acc &= power
        if power in seen:
            break
        seen.add(power)
    return acc


def is_evident(model, event):
    """Whenever the event holds, everyone believes it."""
    return event <= box(model, event)


def check_fixed_point_characterizations(model, event, budget_states=12):
    """Compare common_box against its three finite characterizations.

    Returns a dict of named booleans; all should be true on belief models,
    and the knowledge entry additionally on knowledge models.
    """
    if model.num_states > budget_states:
        raise BudgetExceededError(
            f"{model.num_states} states exceed the event enumeration budget"
        )
    target = common_box(model, event)
    all_events = [frozenset(ev) for ev in subsets_of(model.states())]
    union_post = frozenset()
    for F in all_events:
        if F <= box(model, event & F):
            union_post |= F
    evident = [F for F in all_events if is_evident(model, F)]
    via_evident = frozenset()
    for F in evident:
        if F <= box(model, event):
            via_evident |= F
    report = {
        "union_of_postfixpoints": union_post == target,
        "through_evident_events": via_evident == target,
    }
    if not validate(model, "knowledge"):
        via_evident_sub = frozenset()
        for F in evident:
            if F <= event:
                via_evident_sub |= F
        report["knowledge_reaches_event"] = via_evident_sub == target
    return report


# ---------- between models and restrictions ----------


def restriction_of(model, events):
    """The restriction whose components are the strategy images of the events.

    Pass one event to use it for every player, or a per-player sequence.
    """
    if isinstance(events, (set, frozenset)):
        events = [events] * model.game.n
    events = list(events)
    if len(events) != model.game.n:
        raise ValueError("need one event per player")
    sets = tuple(
        frozenset(model.strategy_of(i, w) for w in events[i])
        for i in range(model.game.n)
    )
    return Restriction(model.game, sets)


def event_of_restriction(model, restriction):
    """States whose joint profile lies inside the restriction."""
    return frozenset(
        w for w in model.states() if restriction.contains_profile(model.profile_of(w))
    )


def standard_model(restriction, correspondences=False):
    """The canonical model of a restriction: states are its joint profiles.

    With correspondences=True each player is given the partition into blocks
    of states sharing their own strategy, which validates at knowledge level.
    """
    game = restriction.game
    profiles = list(restriction.profiles())
    names = []
    used = set()
    for profile in profiles:
        name = ",".join(game.name(i, s) for i, s in enumerate(profile))
        if name in used:
            name = f"{name}#{len(used)}"
        used.add(name)
        names.append(name)
    assignment = tuple(
        tuple(profile[i] for profile in profiles) for i in range(game.n)
    )
    corr = None
    if correspondences:
        corr = []
        for i in range(game.n):
            blocks = {}
            for w, profile in enumerate(profiles):
                blocks.setdefault(profile[i], []).append(w)
            corr.append(
                tuple(frozenset(blocks[profiles[w][i]]) for w in range(len(profiles)))
            )
        corr = tuple(corr)
    model = EpistemicModel(game, tuple(names), assignment, corr)
    if correspondences and profiles:
        # Own-strategy blocks pin exactly the player's own component.
        w = 0
        for i in range(game.n):
            pinned = restriction_of(model, model.P(i, w))
            expected = tuple(
                frozenset([profiles[w][i]]) if j == i else restriction.sets[j]
                for j in range(game.n)
            )
            assert pinned.sets == expected
    return model


# ---------- rationality ----------


def pinned_restriction(model, i, w):
    """G_{P_i(w)}: the restriction induced by the state's possibility set."""
    return restriction_of(model, model.P(i, w))


def rationality_event(model, prop):
    """States where the property holds for the owner's strategy given their beliefs."""
    i = prop.player
    out = []
    cache = {}
    for w in model.states():
        block = model.P(i, w)
        key = (block, model.strategy_of(i, w))
        if key not in cache:
            G = restriction_of(model, block)
            cache[key] = prop.holds(model.strategy_of(i, w), G)
        if cache[key]:
            out.append(w)
    return frozenset(out)


def rat_event(model, profile):
    """States where every player is rational."""
    event = model.all_event()
    for prop in profile:
        event &= rationality_event(model, prop)
    return event


# ---------- theorem checkers ----------


@dataclass(frozen=True)
class InclusionReport:
    ok: bool
    mode: str
    event: frozenset
    lhs: Restriction
    outcome: Restriction


def check_theorem_epist1(model, profile, mode="auto", budget=10):
    """Common belief of rationality only selects surviving strategies.

    For belief models the event is RAT and common belief of RAT; for
    knowledge models common knowledge of RAT alone suffices. Requires a
    monotone profile (guarded).
    """
    require_monotone(profile, budget=budget)
    if mode == "auto":
        mode = "knowledge" if not validate(model, "knowledge") else "belief"
    bad = validate(model, mode)
    if bad:
        raise ValueError(f"model does not validate at level {mode}: {bad[0]}")
    rat = rat_event(model, profile)
    if mode == "knowledge":
        event = common_box(model, rat)
    else:
        event = rat & common_box(model, rat)
    lhs = restriction_of(model, event)
    outcome = iterate_to_outcome(profile).outcome
    ok = all(a <= b for a, b in zip(lhs.sets, outcome.sets))
    return InclusionReport(ok, mode, event, lhs, outcome)


def construct_witness(profile):
    """The proof's witness model: a knowledge model attaining the outcome.

    States are the full game's profiles; every player's possibility set is
    the outcome event F inside it and its complement outside.
    """
    game = profile[0].game
    model = standard_model(game.full_restriction())
    outcome = iterate_to_outcome(profile).outcome
    F = event_of_restriction(model, outcome)
    rest = model.all_event() - F
    per_state = tuple((F if w in F else rest) for w in model.states())
    corr = tuple(per_state for _ in range(game.n))
    witness = EpistemicModel(game, model.state_names, model.assignment, corr)
    assert not validate(witness, "knowledge")
    return witness


@dataclass(frozen=True)
class IdentityReport:
    ok: bool
    hypothesis_ok: bool
    lhs: Restriction


def check_theorem_epist2(profile):
    """With singleton truth, common knowledge of rationality excludes nothing.

    Uses the standard model with identity correspondences P_i(w) = {w};
    the induced restriction of common knowledge of RAT must be the full game.
    """
    game = profile[0].game
    hypothesis_ok = all(satisfies_singleton_truth(prop) for prop in profile)
    base = standard_model(game.full_restriction())
    identity = tuple(
        tuple(frozenset([w]) for w in base.states()) for _ in range(game.n)
    )
    model = EpistemicModel(game, base.state_names, base.assignment, identity)
    event = common_box(model, rat_event(model, profile))
    lhs = restriction_of(model, event)
    ok = lhs == game.full_restriction()
    return IdentityReport(ok, hypothesis_ok, lhs)


# ---------- random model generators ----------


def random_assignment(rng, game, num_states):
    return tuple(
        tuple(rng.randrange(game.strategy_count(i)) for _ in range(num_states))
        for i in range(game.n)
    )


def _random_partition(rng, states):
    states = list(states)
    rng.shuffle(states)
    blocks = []
    pos = 0
    while pos < len(states):
        size = rng.randint(1, len(states) - pos)
        blocks.append(frozenset(states[pos : pos + size]))
        pos += size
    return blocks


def random_knowledge_model(rng, game, max_states=8):
    """Random model with a random information partition per player."""
    k = rng.randint(1, max_states)
    corr = []
    for _ in range(game.n):
        blocks = _random_partition(rng, range(k))
        lookup = {}
        for block in blocks:
            for w in block:
                lookup[w] = block
        corr.append(tuple(lookup[w] for w in range(k)))
    model = EpistemicModel(
        game,
        tuple(f"w{w + 1}" for w in range(k)),
        random_assignment(rng, game, k),
        tuple(corr),
    )
    assert not validate(model, "knowledge")
    return model


def random_belief_model(rng, game, max_states=8):
    """Random belief-level model: blocks partition part of the state space and
    the remaining states point at an arbitrary block, so frames need not be
    reflexive."""
    k = rng.randint(1, max_states)
    corr = []
    for _ in range(game.n):
        core = rng.sample(range(k), rng.randint(1, k))
        blocks = _random_partition(rng, core)
        lookup = {}
        for block in blocks:
            for w in block:
                lookup[w] = block
        per_state = tuple(
            lookup.get(w, None) or rng.choice(blocks) for w in range(k)
        )
        corr.append(per_state)
    model = EpistemicModel(
        game,
        tuple(f"w{w + 1}" for w in range(k)),
        random_assignment(rng, game, k),
        tuple(corr),
    )
    assert not validate(model, "belief")
    return model


# ---------- model file format ----------


@dataclass(frozen=True)
class LoadedModel:
    model: EpistemicModel
    level: str
    game_path: str


def parse_model(text, base_dir="."):
    """Parse the plain-text model format; see the README for the layout."""
    game = None
    game_path = None
    state_names = None
    assigns = {}  # (state, player) -> strategy
    plines = {}  # (player, state) -> frozenset of states
    level = "bare"
    level_seen = False

    def state_idx(name, lineno):
        try:
            return state_names.index(name)
        except ValueError:
            raise ModelFormatError(f"unknown state {name!r}", lineno) from None

    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.split("#", 1)[0].strip()
        if not stripped:
            continue
        toks = stripped.split()
        head = toks[0]
        if head == "game":
            if len(toks) != 2:
                raise ModelFormatError("expected 'game <path>'", lineno)
            game_path = toks[1]
            path = game_path
            if not os.path.isabs(path):
                path = os.path.join(base_dir, path)
            game = load_game_file(path)
        elif head == "states":
            if game is None:
                raise ModelFormatError("'states' before 'game'", lineno)
            if len(toks) < 2:
                raise ModelFormatError("no states listed", lineno)
            if len(set(toks[1:])) != len(toks) - 1:
                raise ModelFormatError("duplicate state name", lineno)
            state_names = tuple(toks[1:])
        elif head == "assign":
            if state_names is None:
                raise ModelFormatError("'assign' before 'states'", lineno)
            if len(toks) != 4:
                raise ModelFormatError("expected 'assign <state> <player> <strategy>'", lineno)
            w = state_idx(toks[1], lineno)
            try:
                i = int(toks[2]) - 1
            except ValueError:
                raise ModelFormatError(f"bad player {toks[2]!r}", lineno) from None
            if not 0 <= i < game.n:
                raise ModelFormatError(f"player {toks[2]} out of range", lineno)
            try:
                s = game.index(i, toks[3])
            except KeyError:
                raise ModelFormatError(
                    f"unknown strategy {toks[3]!r} for player {i + 1}", lineno
                ) from None
            if (w, i) in assigns:
                raise ModelFormatError(
                    f"assignment for state {toks[1]} player {i + 1} given twice", lineno
                )
            assigns[(w, i)] = s
        elif head == "P":
            if state_names is None:
                raise ModelFormatError("'P' before 'states'", lineno)
            if len(toks) < 4 or toks[3] != ":":
                raise ModelFormatError("expected 'P <player> <state> : <state>...'", lineno)
            try:
                i = int(toks[1]) - 1
            except ValueError:
                raise ModelFormatError(f"bad player {toks[1]!r}", lineno) from None
            if not 0 <= i < game.n:
                raise ModelFormatError(f"player {toks[1]} out of range", lineno)
            w = state_idx(toks[2], lineno)
            if (i, w) in plines:
                raise ModelFormatError(
                    f"P for player {i + 1} at state {toks[2]} given twice", lineno
                )
            plines[(i, w)] = frozenset(state_idx(nm, lineno) for nm in toks[4:])
        elif head == "level":
            if len(toks) != 2 or toks[1] not in LEVELS:
                raise ModelFormatError("expected 'level bare|belief|knowledge'", lineno)
            level = toks[1]
            level_seen = True
        else:
            raise ModelFormatError(f"unexpected directive {head!r}", lineno)

    if game is None:
        raise ModelFormatError("missing 'game' line")
    if state_names is None:
        raise ModelFormatError("missing 'states' line")
    for w, name in enumerate(state_names):
        for i in range(game.n):
            if (w, i) not in assigns:
                raise ModelFormatError(
                    f"no strategy assigned to player {i + 1} at state {name}"
                )
    assignment = tuple(
        tuple(assigns[(w, i)] for w in range(len(state_names)))
        for i in range(game.n)
    )
    corr = None
    if plines:
        for i in range(game.n):
            for w in range(len(state_names)):
                if (i, w) not in plines:
                    raise ModelFormatError(
                        f"P lines present but P_{i + 1}({state_names[w]}) missing"
                    )
        corr = tuple(
            tuple(plines[(i, w)] for w in range(len(state_names)))
            for i in range(game.n)
        )
    model = EpistemicModel(game, state_names, assignment, corr)
    if level_seen:
        bad = validate(model, level)
        if bad:
            raise ModelFormatError(f"model does not validate at level {level}: {bad[0]}")
    elif corr is not None:
        level = "belief" if not validate(model, "belief") else "bare"
    return LoadedModel(model, level, game_path)


def load_model_file(path):
    with open(path, "r", encoding="utf-8") as fh:
        return parse_model(fh.read(), base_dir=os.path.dirname(path) or ".")


def model_to_text(model, game_path, level="bare"):
    out = [f"game {game_path}", "states " + " ".join(model.state_names)]
    for w, name in enumerate(model.state_names):
        for i in range(model.game.n):
            out.append(
                f"assign {name} {i + 1} {model.game.name(i, model.strategy_of(i, w))}"
            )
    if model.correspondences is not None:
        for i in range(model.game.n):
            for w, name in enumerate(model.state_names):
                block = " ".join(model.state_names[v] for v in sorted(model.P(i, w)))
                out.append(f"P {i + 1} {name} : {block}")
    out.append(f"level {level}")
    return "\n".join(out) + "\n"
