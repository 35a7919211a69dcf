"""Public announcements on epistemic models.

An announcement is one event per player; its effect keeps only the states in
every announced event and cuts possibility sets down to the survivors. The
iterators below repeatedly announce optimality or rationality until the model
stops shrinking.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

from .epistemic import (
    EpistemicModel,
    rationality_event,
    restriction_of,
    standard_model,
)
from .games import BudgetExceededError
from .optimality import satisfies_condition_A


def _check_events(model, events):
    events = tuple(frozenset(e) for e in events)
    if len(events) != model.game.n:
        raise ValueError("need one announced event per player")
    for e in events:
        for w in e:
            if not 0 <= w < model.num_states:
                raise ValueError(f"state {w!r} is not in the model")
    return events


def effect(model, events):
    """The model after a joint announcement.

    Only states inside every announced event survive; when the model carries
    possibility correspondences they are restricted to the survivors, which
    can leave a player with an empty possibility set.
    """
    events = _check_events(model, events)
    common = model.all_event()
    for e in events:
        common &= e
    survivors = sorted(common)
    index = {w: k for k, w in enumerate(survivors)}
    names = tuple(model.state_names[w] for w in survivors)
    assignment = tuple(
        tuple(model.assignment[i][w] for w in survivors) for i in range(model.game.n)
    )
    corr = None
    if model.correspondences is not None:
        corr = tuple(
            tuple(
                frozenset(index[v] for v in model.P(i, w) if v in index)
                for w in survivors
            )
            for i in range(model.game.n)
        )
    return EpistemicModel(model.game, names, assignment, corr)


def announced_restriction(model, events):
    """Per-player strategy images of the announced events."""
    return restriction_of(model, _check_events(model, events))


def misses_announced_restriction(model, events):
    """True when the announcement empties the model even though the announced
    restriction offers every player a strategy: no state is left to model it."""
    events = _check_events(model, events)
    common = model.all_event()
    for e in events:
        common &= e
    return not common and not announced_restriction(model, events).is_empty()


def is_standard(model):
    """States are the joint profiles of the induced restriction, one each."""
    profiles = [model.profile_of(w) for w in model.states()]
    if len(set(profiles)) != len(profiles):
        return False
    induced = restriction_of(model, model.all_event())
    return set(profiles) == set(induced.profiles())


def is_standard_knowledge(model):
    """Standard, and every possibility set is the own-strategy block."""
    if model.correspondences is None or not is_standard(model):
        return False
    for i in range(model.game.n):
        for w in model.states():
            block = frozenset(
                v
                for v in model.states()
                if model.strategy_of(i, v) == model.strategy_of(i, w)
            )
            if model.P(i, w) != block:
                return False
    return True


def is_proper(model, events):
    """Proper announcements live on standard models and announce, per player,
    the full cylinder over a subset of that player's own strategies."""
    events = _check_events(model, events)
    if not is_standard(model):
        return False
    for i, e in enumerate(events):
        image = {model.strategy_of(i, w) for w in e}
        cylinder = frozenset(
            w for w in model.states() if model.strategy_of(i, w) in image
        )
        if e != cylinder:
            return False
    return True


def optimality_event(model, prop, restriction=None):
    """States whose owner's strategy satisfies the property in the restriction
    (default: the restriction induced by the whole model)."""
    if restriction is None:
        restriction = restriction_of(model, model.all_event())
    i = prop.player
    cache = {}
    out = []
    for w in model.states():
        s = model.strategy_of(i, w)
        if s not in cache:
            cache[s] = prop.holds(s, restriction)
        if cache[s]:
            out.append(w)
    return frozenset(out)


# ---------- iterated announcements ----------


@dataclass(frozen=True)
class AnnouncementTrace:
    models: tuple
    events: tuple  # per transition: the tuple of per-player announced events

    @property
    def terminal(self):
        return self.models[-1]

    @property
    def rounds(self):
        return len(self.models) - 1


def _run(model, next_events):
    models = [model]
    rounds = []
    while True:
        events = next_events(model)
        nxt = effect(model, events)
        if nxt.num_states == model.num_states:
            break
        rounds.append(events)
        models.append(nxt)
        model = nxt
    return AnnouncementTrace(tuple(models), tuple(rounds))


def iterate_optimality_announcements(profile, start=None):
    """Announce, round after round, that each player's strategy satisfies
    their property in the current induced restriction."""
    game = profile[0].game
    model = start if start is not None else standard_model(game.full_restriction())

    def next_events(m):
        current = restriction_of(m, m.all_event())
        return tuple(
            optimality_event(m, profile[i], current) for i in range(game.n)
        )

    return _run(model, next_events)


def iterate_rationality_announcements(profile, start=None, check_condition=True, budget=10):
    """Announce rationality (optimality given each player's beliefs) until the
    model stops shrinking. Start defaults to the standard knowledge model.

    Properties that depend on the owner's own component of the restriction
    can make the terminal model diverge from the elimination outcome, so
    by default each property is screened and a warning issued when it fails.
    """
    game = profile[0].game
    if start is None:
        start = standard_model(game.full_restriction(), correspondences=True)
    if start.correspondences is None:
        raise ValueError("rationality announcements need possibility correspondences")
    if check_condition:
        for prop in profile:
            try:
                report = satisfies_condition_A(prop, budget=budget)
            except BudgetExceededError:
                warnings.warn(f"own-component screening skipped for {prop.name}")
                continue
            if not report.independent:
                warnings.warn(
                    f"property {prop.name} reads its owner's own component; "
                    "the terminal model may not match the elimination outcome"
                )

    def next_events(m):
        return tuple(rationality_event(m, profile[i]) for i in range(game.n))

    return _run(start, next_events)


def models_equal_via_profiles(a, b, check_correspondences=True):
    """Equality up to renaming states by their joint profiles.

    Requires distinct profiles within each model so the renaming is forced.
    """
    if a.game is not b.game:
        return False
    pa = [a.profile_of(w) for w in a.states()]
    pb = [b.profile_of(w) for w in b.states()]
    if len(set(pa)) != len(pa) or len(set(pb)) != len(pb):
        return False
    if set(pa) != set(pb):
        return False
    to_b = {w: pb.index(pa[w]) for w in a.states()}
    if check_correspondences:
        if (a.correspondences is None) != (b.correspondences is None):
            return False
        if a.correspondences is not None:
            for i in range(a.game.n):
                for w in a.states():
                    mapped = frozenset(to_b[v] for v in a.P(i, w))
                    if mapped != b.P(i, to_b[w]):
                        return False
    return True
