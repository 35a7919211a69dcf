"""Command line front end.

Commands: solve (iterated elimination), announce (public announcements on a
game or a model file), eval (formula evaluation on a model), check (randomized
cross-checks), derive (derivation validation). Exit codes: 0 on success, 1
when a check fails or a derivation is invalid, 2 on usage or format errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

from . import announcements, checks, epistemic, games, logic, operators, optimality
from .logic import DerivationFormatError, LogicEvalError, LogicParseError


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="epigame",
        description="Iterated elimination of non-optimal strategies and its "
        "epistemic foundations.",
    )
    parser.add_argument("--seed", type=int, default=0, help="seed for randomized commands")
    parser.add_argument(
        "--format",
        choices=("text", "json-lines"),
        default="text",
        help="output style",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="iterate the elimination operator on a game")
    solve.add_argument("game", help="path to a .game file")
    solve.add_argument(
        "--property",
        default="sd_l",
        help="builtin property name, or a comma list with one name per player",
    )
    solve.add_argument(
        "--belief-class",
        choices=("pure", "mixed", "correlated"),
        default=None,
        help="beliefs used by the best response properties",
    )
    solve.add_argument("--grid-denominator", type=int, default=None)
    solve.add_argument("--trace", action="store_true", help="print every stage")

    announce = sub.add_parser(
        "announce", help="announce events on a model, or iterate announcements"
    )
    announce.add_argument("path", help="a .game or .emodel file")
    announce.add_argument("--property", default=None, help="builtin property names")
    announce.add_argument(
        "--rationality",
        action="store_true",
        help="announce rationality instead of plain optimality",
    )
    announce.add_argument(
        "--events",
        default=None,
        help="one announcement: per-player state groups joined by '|', "
        "state names within a group joined by ','",
    )
    announce.add_argument("--emit-model", default=None, help="write the result here")

    evalp = sub.add_parser("eval", help="evaluate a formula on a model file")
    evalp.add_argument("model", help="path to an .emodel file")
    evalp.add_argument("--formula", required=True)
    evalp.add_argument(
        "--property",
        default=None,
        help="builtin property names, needed when the formula mentions rat or O",
    )
    evalp.add_argument("--belief-class", choices=("pure", "mixed", "correlated"), default=None)

    check = sub.add_parser("check", help="run randomized cross-checks")
    check.add_argument("suite", help="a suite or single check name")
    check.add_argument("--random", type=int, default=20, help="instances per check")
    check.add_argument("--property", default=None, help="restrict the property pool")
    check.add_argument("--jobs", type=int, default=1)
    check.add_argument("--max-players", type=int, default=3)
    check.add_argument("--max-strategies", type=int, default=4)
    check.add_argument("--max-states", type=int, default=8)
    check.add_argument(
        "--budget-states",
        type=int,
        default=12,
        help="state cap for event enumeration checks",
    )
    check.add_argument(
        "--budget-restrictions",
        type=int,
        default=10,
        help="total strategy cap for restriction enumeration",
    )

    derive = sub.add_parser("derive", help="validate a derivation file")
    derive.add_argument("file")
    return parser


def _emit(args, payload, text_lines):
    if args.format == "json-lines":
        print(json.dumps(payload, sort_keys=True))
    else:
        for line in text_lines:
            print(line)


def _profile_for(game, names, belief_class=None, grid_denominator=None):
    return optimality.profile_named(game, names, belief_class, grid_denominator)


def _portable_game_path(game_path, base_dir, out_path):
    """A game reference that resolves from the emitted model's directory."""
    resolved = game_path
    if not os.path.isabs(resolved):
        resolved = os.path.join(base_dir, resolved)
    return os.path.relpath(os.path.abspath(resolved), os.path.dirname(os.path.abspath(out_path)) or ".")


# ---------- commands ----------


def _cmd_solve(args):
    game = games.load_game_file(args.game)
    profile = _profile_for(game, args.property, args.belief_class, args.grid_denominator)
    trace = operators.iterate_to_outcome(profile)
    payload = {
        "property": [p.name for p in profile],
        "stages": [
            [sorted(game.name(i, s) for s in part) for i, part in enumerate(G.sets)]
            for G in trace.stages
        ],
        "outcome": [
            sorted(game.name(i, s) for s in part)
            for i, part in enumerate(trace.outcome.sets)
        ],
        "closure_ordinal": trace.closure_ordinal,
    }
    lines = [f"property: {','.join(p.name for p in profile)}"]
    if args.trace:
        lines.extend(operators.serialize_trace(trace).splitlines())
    lines.append(f"outcome: {trace.outcome.describe()}")
    lines.append(f"closure ordinal: {trace.closure_ordinal}")
    _emit(args, payload, lines)
    return 0


def _parse_events(model, text):
    groups = text.split("|")
    if len(groups) != model.game.n:
        raise ValueError(
            f"expected {model.game.n} event groups separated by '|', got {len(groups)}"
        )
    events = []
    for group in groups:
        names = [nm for nm in group.split(",") if nm.strip()]
        events.append(frozenset(model.state_index(nm.strip()) for nm in names))
    return tuple(events)


def _announce_game(args):
    game = games.load_game_file(args.path)
    if args.events is not None:
        raise ValueError("--events applies to model files; game files iterate")
    profile = _profile_for(game, args.property or "sd_l")
    if args.rationality:
        trace = announcements.iterate_rationality_announcements(profile)
        level = "knowledge"
    else:
        trace = announcements.iterate_optimality_announcements(profile)
        level = "bare"
    terminal = trace.terminal
    induced = epistemic.restriction_of(terminal, terminal.all_event())
    payload = {
        "rounds": trace.rounds,
        "states": list(terminal.state_names),
        "restriction": [
            sorted(game.name(i, s) for s in part) for i, part in enumerate(induced.sets)
        ],
    }
    lines = [f"rounds: {trace.rounds}"]
    for k, model in enumerate(trace.models):
        lines.append(f"round {k} states: {' '.join(model.state_names) or '(none)'}")
    lines.append(f"terminal restriction: {induced.describe()}")
    _emit(args, payload, lines)
    if args.emit_model:
        ref = _portable_game_path(args.path, ".", args.emit_model)
        with open(args.emit_model, "w", encoding="utf-8") as fh:
            fh.write(epistemic.model_to_text(terminal, ref, level))
    return 0


def _announce_model(args):
    loaded = epistemic.load_model_file(args.path)
    model = loaded.model
    if args.events is None:
        if args.property is None:
            raise ValueError("model announcements need --events or --property")
        profile = _profile_for(model.game, args.property)
        if args.rationality:
            trace = announcements.iterate_rationality_announcements(profile, start=model)
        else:
            trace = announcements.iterate_optimality_announcements(profile, start=model)
        result = trace.terminal
        payload = {"rounds": trace.rounds, "states": list(result.state_names)}
        lines = [f"rounds: {trace.rounds}", f"states: {' '.join(result.state_names) or '(none)'}"]
    else:
        events = _parse_events(model, args.events)
        result = announcements.effect(model, events)
        announced = announcements.announced_restriction(model, events)
        missed = announcements.misses_announced_restriction(model, events)
        payload = {
            "proper": announcements.is_proper(model, events),
            "states": list(result.state_names),
            "announced_restriction": [
                sorted(model.game.name(i, s) for s in part)
                for i, part in enumerate(announced.sets)
            ],
            "not_a_model_of_announced": missed,
        }
        lines = [
            f"proper: {'yes' if payload['proper'] else 'no'}",
            f"surviving states: {' '.join(result.state_names) or '(none)'}",
            f"announced restriction: {announced.describe()}",
        ]
        if missed:
            lines.append(
                "warning: no state survives, so the result is not a model "
                "of the announced restriction"
            )
    _emit(args, payload, lines)
    if args.emit_model:
        level = loaded.level
        if epistemic.validate(result, level):
            level = "bare"
        ref = _portable_game_path(
            loaded.game_path, os.path.dirname(args.path) or ".", args.emit_model
        )
        with open(args.emit_model, "w", encoding="utf-8") as fh:
            fh.write(epistemic.model_to_text(result, ref, level))
    return 0


def _cmd_announce(args):
    if args.path.endswith(".game"):
        return _announce_game(args)
    if args.path.endswith(".emodel"):
        return _announce_model(args)
    raise ValueError("announce expects a .game or .emodel path")


def _mentions(formula, kinds):
    if isinstance(formula, kinds):
        return True
    for attr in ("sub", "left", "right", "body"):
        child = getattr(formula, attr, None)
        if child is not None and _mentions(child, kinds):
            return True
    return False


def _cmd_eval(args):
    loaded = epistemic.load_model_file(args.model)
    model = loaded.model
    formula = logic.parse_lnu(args.formula)
    profile = None
    if args.property is not None:
        profile = _profile_for(model.game, args.property, args.belief_class)
    elif _mentions(formula, (logic.Rat, logic.Opt)):
        raise ValueError("the formula mentions rat or O: supply --property")
    event = logic.eval_lnu(model, formula, profile)
    valid = event == model.all_event()
    payload = {
        "holds_at": [model.state_names[w] for w in sorted(event)],
        "valid": valid,
    }
    lines = [
        "holds at: " + (" ".join(payload["holds_at"]) or "(nowhere)"),
        f"valid: {'yes' if valid else 'no'}",
    ]
    _emit(args, payload, lines)
    return 0


def _cmd_check(args):
    if args.suite not in checks.SUITES and args.suite not in checks.CHECKS:
        raise ValueError(
            f"unknown suite or check {args.suite!r}; "
            f"suites: {', '.join(checks.SUITES)}"
        )
    properties = None
    if args.property is not None:
        properties = tuple(nm.strip() for nm in args.property.split(","))
        for nm in properties:
            if nm not in optimality.BUILTIN_NAMES:
                raise ValueError(f"unknown property {nm!r}")
        selected = checks.SUITES.get(args.suite, (args.suite,))
        for name in selected:
            pool = checks.CHECK_POOLS.get(name)
            if pool is not None and not set(properties) <= set(pool):
                raise ValueError(
                    f"check {name} only accepts properties from: {', '.join(pool)}"
                )
    cfg = checks.CheckConfig(
        seed=args.seed,
        count=args.random,
        max_players=args.max_players,
        max_strategies=args.max_strategies,
        max_states=args.max_states,
        budget=args.budget_restrictions,
        properties=properties,
    )
    start = time.time()
    results = checks.run_suite(args.suite, cfg, jobs=args.jobs)
    for result in results:
        if args.format == "json-lines":
            print(
                json.dumps(
                    {
                        "name": result.name,
                        "passed": result.passed,
                        "instances": result.instances,
                        "detail": result.detail,
                        "counterexample": result.counterexample,
                    },
                    sort_keys=True,
                )
            )
        elif result.passed:
            print(f"PASS {result.name} ({result.instances} instances)")
        else:
            print(f"FAIL {result.name} ({result.instances} instances): {result.detail}")
            if result.counterexample is not None:
                print("  " + json.dumps(result.counterexample, sort_keys=True))
    failed = sum(1 for r in results if not r.passed)
    if args.format == "text":
        print(f"{len(results)} checks: {len(results) - failed} passed, {failed} failed")
    print(f"elapsed: {time.time() - start:.2f}s", file=sys.stderr)
    return 1 if failed else 0


def _cmd_derive(args):
    with open(args.file, "r", encoding="utf-8") as fh:
        text = fh.read()
    steps = logic.parse_derivation(text)
    report = logic.check_derivation(steps)
    payload = {
        "valid": report.valid,
        "steps": [
            {
                "index": sr.index,
                "ok": sr.ok,
                "formula": None if sr.formula is None else logic.pretty(sr.formula),
                "reason": sr.reason,
            }
            for sr in report.steps
        ],
    }
    lines = []
    for sr in report.steps:
        if sr.ok:
            lines.append(f"step {sr.index} ok: {logic.pretty(sr.formula)}")
        else:
            lines.append(f"step {sr.index} FAILED: {sr.reason}")
    lines.append("Valid" if report.valid else "Invalid")
    _emit(args, payload, lines)
    return 0 if report.valid else 1


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "solve": _cmd_solve,
        "announce": _cmd_announce,
        "eval": _cmd_eval,
        "check": _cmd_check,
        "derive": _cmd_derive,
    }
    try:
        return handlers[args.command](args)
    except (
        games.GameFormatError,
        epistemic.ModelFormatError,
        LogicParseError,
        LogicEvalError,
        DerivationFormatError,
        games.BudgetExceededError,
        optimality.NonMonotonicPropertyError,
        FileNotFoundError,
        ValueError,
        KeyError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
