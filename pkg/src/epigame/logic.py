"""The modal fixpoint language, the first-order optimality language, and a
checker for the three-rule derivation system built on them.

Both parsers are recursive descent over a small token stream. Implication,
disjunction, bounded quantifiers and strict comparisons are surface sugar,
desugared at parse time to the primitive connectives, so structural equality
of syntax trees is equality of primitive forms.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional

from .epistemic import box, rationality_event, restriction_of
from .games import BudgetExceededError, full_profile, subsets_of


class LogicParseError(ValueError):
    def __init__(self, message, pos):
        super().__init__(f"at position {pos}: {message}")
        self.pos = pos


class LogicEvalError(ValueError):
    pass


# ---------- modal fixpoint language ----------


@dataclass(frozen=True)
class Rat:
    player: Optional[int]  # None means every player


@dataclass(frozen=True)
class Var:
    pass


@dataclass(frozen=True)
class NotF:
    sub: object


@dataclass(frozen=True)
class AndF:
    left: object
    right: object


@dataclass(frozen=True)
class Box:
    player: Optional[int]
    sub: object


@dataclass(frozen=True)
class Opt:
    player: Optional[int]
    sub: object


@dataclass(frozen=True)
class Nu:
    body: object


def impl(a, b):
    return NotF(AndF(a, NotF(b)))


def common_belief(f):
    """CB(f) desugars to the greatest fixpoint of 'everyone believes x and f'."""
    return Nu(Box(None, AndF(Var(), f)))


def contains_nu(f):
    if isinstance(f, Nu):
        return True
    if isinstance(f, NotF):
        return contains_nu(f.sub)
    if isinstance(f, AndF):
        return contains_nu(f.left) or contains_nu(f.right)
    if isinstance(f, (Box, Opt)):
        return contains_nu(f.sub)
    return False


def has_free_var(f):
    if isinstance(f, Var):
        return True
    if isinstance(f, Nu):
        return False  # its variable is bound
    if isinstance(f, NotF):
        return has_free_var(f.sub)
    if isinstance(f, AndF):
        return has_free_var(f.left) or has_free_var(f.right)
    if isinstance(f, (Box, Opt)):
        return has_free_var(f.sub)
    return False


def var_positive(f, parity=0):
    """Every free fixpoint-variable occurrence under an even number of '!'."""
    if isinstance(f, Var):
        return parity % 2 == 0
    if isinstance(f, NotF):
        return var_positive(f.sub, parity + 1)
    if isinstance(f, AndF):
        return var_positive(f.left, parity) and var_positive(f.right, parity)
    if isinstance(f, (Box, Opt)):
        return var_positive(f.sub, parity)
    return True  # Rat, Nu (whose variable is its own)


def subst(f, replacement):
    """Replace free occurrences of the fixpoint variable."""
    if isinstance(f, Var):
        return replacement
    if isinstance(f, NotF):
        return NotF(subst(f.sub, replacement))
    if isinstance(f, AndF):
        return AndF(subst(f.left, replacement), subst(f.right, replacement))
    if isinstance(f, Box):
        return Box(f.player, subst(f.sub, replacement))
    if isinstance(f, Opt):
        return Opt(f.player, subst(f.sub, replacement))
    return f  # Rat and Nu (bound variable)


def pretty(f):
    if isinstance(f, Rat):
        return "rat" if f.player is None else f"rat_{f.player + 1}"
    if isinstance(f, Var):
        return "x"
    if isinstance(f, NotF):
        if isinstance(f.sub, AndF) and isinstance(f.sub.right, NotF):
            return f"({pretty(f.sub.left)} -> {pretty(f.sub.right.sub)})"
        return f"!{_wrap(f.sub)}"
    if isinstance(f, AndF):
        return f"({pretty(f.left)} & {pretty(f.right)})"
    if isinstance(f, Box):
        mod = "Box" if f.player is None else f"Box_{f.player + 1}"
        return f"{mod} {_wrap(f.sub)}"
    if isinstance(f, Opt):
        mod = "O" if f.player is None else f"O_{f.player + 1}"
        return f"{mod} {_wrap(f.sub)}"
    if isinstance(f, Nu):
        return f"nu x. {pretty(f.body)}"
    raise TypeError(f"not a formula: {f!r}")


def _wrap(f):
    text = pretty(f)
    if isinstance(f, (Rat, Var)) or text.startswith("("):
        return text
    return f"({text})"


_LNU_TOKEN = re.compile(r"\s*(?:(->)|([&!().])|([A-Za-z][A-Za-z0-9_]*))")
_LNU_NAME = re.compile(r"^(rat|Box|O|CB|nu|x)(?:_([1-9][0-9]*))?$")


def _lex_lnu(text):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _LNU_TOKEN.match(text, pos)
        if not m:
            break
        if m.group(1):
            tokens.append(("->", None, m.start(1)))
        elif m.group(2):
            tokens.append((m.group(2), None, m.start(2)))
        else:
            name = m.group(3)
            nm = _LNU_NAME.match(name)
            if not nm:
                raise LogicParseError(f"unknown name {name!r}", m.start(3))
            base, sub = nm.group(1), nm.group(2)
            if base in ("x", "nu", "CB") and sub is not None:
                raise LogicParseError(f"{base} takes no subscript", m.start(3))
            player = None if sub is None else int(sub) - 1
            tokens.append((base, player, m.start(3)))
        pos = m.end()
    if text[pos:].strip():
        raise LogicParseError(f"bad character {text[pos:].strip()[0]!r}", pos)
    tokens.append(("end", None, len(text)))
    return tokens


class _LnuParser:
    def __init__(self, text):
        self.tokens = _lex_lnu(text)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def eat(self, kind=None):
        tok = self.tokens[self.pos]
        if kind is not None and tok[0] != kind:
            raise LogicParseError(f"expected {kind!r}, found {tok[0]!r}", tok[2])
        self.pos += 1
        return tok

    def formula(self):
        if self.peek()[0] == "nu":
            start = self.eat()
            self.eat("x")
            self.eat(".")
            body = self.formula()
            if contains_nu(body):
                raise LogicParseError("nested fixpoints are not allowed", start[2])
            if not var_positive(body):
                raise LogicParseError(
                    "fixpoint variable occurs under an odd number of negations",
                    start[2],
                )
            return Nu(body)
        return self.implication()

    def implication(self):
        left = self.conjunction()
        if self.peek()[0] == "->":
            self.eat()
            return impl(left, self.formula())
        return left

    def conjunction(self):
        node = self.unary()
        while self.peek()[0] == "&":
            self.eat()
            node = AndF(node, self.unary())
        return node

    def unary(self):
        kind, player, pos = self.peek()
        if kind == "!":
            self.eat()
            return NotF(self.unary())
        if kind == "Box":
            self.eat()
            return Box(player, self.unary())
        if kind == "O":
            self.eat()
            return Opt(player, self.unary())
        return self.atom()

    def atom(self):
        kind, player, pos = self.peek()
        if kind == "rat":
            self.eat()
            return Rat(player)
        if kind == "x":
            self.eat()
            return Var()
        if kind == "CB":
            self.eat()
            self.eat("(")
            inner = self.formula()
            self.eat(")")
            return common_belief(inner)
        if kind == "(":
            self.eat()
            inner = self.formula()
            self.eat(")")
            return inner
        raise LogicParseError(f"unexpected {kind!r}", pos)


def parse_lnu(text):
    parser = _LnuParser(text)
    node = parser.formula()
    parser.eat("end")
    return node


def eval_lnu(model, formula, profile=None, x_event=None):
    """The event where a formula holds. Needs a profile for rat and O; a free
    fixpoint variable, if any, denotes the event passed as x_event.

    Greatest fixpoints are computed by downward iteration; a non-shrinking
    step means the body is not monotone for the supplied properties (possible
    despite syntactic positivity when a non-monotone property sits under O)
    and raises instead of converging to a wrong answer.
    """
    rat_cache = {}

    def rat_of(i):
        if profile is None:
            raise LogicEvalError("formula mentions rat but no profile was supplied")
        if i not in rat_cache:
            rat_cache[i] = rationality_event(model, profile[i])
        return rat_cache[i]

    everyone = range(model.game.n)

    def ev(f, xval):
        if isinstance(f, Rat):
            players = everyone if f.player is None else [f.player]
            event = model.all_event()
            for i in players:
                event &= rat_of(i)
            return event
        if isinstance(f, Var):
            if xval is None:
                raise LogicEvalError("free fixpoint variable outside nu")
            return xval
        if isinstance(f, NotF):
            return model.all_event() - ev(f.sub, xval)
        if isinstance(f, AndF):
            return ev(f.left, xval) & ev(f.right, xval)
        if isinstance(f, Box):
            return box(model, ev(f.sub, xval), f.player)
        if isinstance(f, Opt):
            if profile is None:
                raise LogicEvalError("formula mentions O but no profile was supplied")
            event = ev(f.sub, xval)
            G = restriction_of(model, event)
            players = everyone if f.player is None else [f.player]
            return frozenset(
                w
                for w in model.states()
                if all(profile[i].holds(model.strategy_of(i, w), G) for i in players)
            )
        if isinstance(f, Nu):
            current = model.all_event()
            while True:
                nxt = ev(f.body, current)
                if nxt == current:
                    return current
                if not nxt <= current:
                    raise LogicEvalError(
                        "fixpoint iteration is not shrinking; "
                        "a property under O is not monotone"
                    )
                current = nxt
        raise TypeError(f"not a formula: {f!r}")

    return ev(formula, x_event)


def find_validity_counterexample(formula, instances):
    """First (model, profile) where the formula fails somewhere, else None."""
    for model, profile in instances:
        if eval_lnu(model, formula, profile) != model.all_event():
            return model, profile
    return None


def check_rat_definability(model, profile, budget_states=12):
    """rat_i must equal 'every believed event is an optimality event', with the
    set quantifier ranging over all events of the finite model."""
    if model.num_states > budget_states:
        raise BudgetExceededError(
            f"{model.num_states} states exceed the event enumeration budget"
        )
    events = [frozenset(ev) for ev in subsets_of(model.states())]
    for i in range(model.game.n):
        lhs = rationality_event(model, profile[i])
        rhs = set(model.states())
        for X in events:
            believes = box(model, X, i)
            G = restriction_of(model, X)
            optimal = frozenset(
                w
                for w in model.states()
                if profile[i].holds(model.strategy_of(i, w), G)
            )
            rhs &= (model.all_event() - believes) | optimal
        if lhs != frozenset(rhs):
            return False
    return True


# ---------- first-order optimality language ----------


@dataclass(frozen=True)
class Member:
    var: str


@dataclass(frozen=True)
class Cmp:
    player: int
    left: str
    ctx: str
    right: str


@dataclass(frozen=True)
class NotO:
    sub: object


@dataclass(frozen=True)
class AndO:
    left: object
    right: object


@dataclass(frozen=True)
class ExistsO:
    var: str
    body: object


def o_impl(a, b):
    return NotO(AndO(a, NotO(b)))


def o_or(a, b):
    return NotO(AndO(NotO(a), NotO(b)))


def o_forall(var, body):
    return NotO(ExistsO(var, NotO(body)))


_LO_TOKEN = re.compile(
    r"\s*(?:(->)|(>=\^([1-9][0-9]*)_([A-Za-z][A-Za-z0-9_]*))"
    r"|(>\^([1-9][0-9]*)_([A-Za-z][A-Za-z0-9_]*))"
    r"|([|&!()])|([A-Za-z][A-Za-z0-9_]*))"
)
_LO_KEYWORDS = ("exists", "forall", "in", "X")


def _lex_lo(text):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _LO_TOKEN.match(text, pos)
        if not m:
            break
        if m.group(1):
            tokens.append(("->", None, m.start(1)))
        elif m.group(2):
            tokens.append(("ge", (int(m.group(3)) - 1, m.group(4)), m.start(2)))
        elif m.group(5):
            tokens.append(("gt", (int(m.group(6)) - 1, m.group(7)), m.start(5)))
        elif m.group(8):
            tokens.append((m.group(8), None, m.start(8)))
        else:
            name = m.group(9)
            kind = name if name in _LO_KEYWORDS else "name"
            tokens.append((kind, name, m.start(9)))
        pos = m.end()
    if text[pos:].strip():
        raise LogicParseError(f"bad character {text[pos:].strip()[0]!r}", pos)
    tokens.append(("end", None, len(text)))
    return tokens


class _LoParser:
    """Quantifiers scope as far right as possible; parenthesize to stop them."""

    def __init__(self, text):
        self.tokens = _lex_lo(text)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def eat(self, kind=None):
        tok = self.tokens[self.pos]
        if kind is not None and tok[0] != kind:
            raise LogicParseError(f"expected {kind!r}, found {tok[0]!r}", tok[2])
        self.pos += 1
        return tok

    def formula(self):
        left = self.disjunction()
        if self.peek()[0] == "->":
            self.eat()
            return o_impl(left, self.formula())
        return left

    def disjunction(self):
        node = self.conjunction()
        while self.peek()[0] == "|":
            self.eat()
            node = o_or(node, self.conjunction())
        return node

    def conjunction(self):
        node = self.unary()
        while self.peek()[0] == "&":
            self.eat()
            node = AndO(node, self.unary())
        return node

    def unary(self):
        kind, value, pos = self.peek()
        if kind == "!":
            self.eat()
            return NotO(self.unary())
        if kind in ("exists", "forall"):
            return self.quantifier()
        return self.atom()

    def quantifier(self):
        kind, _, pos = self.eat()
        var_tok = self.eat("name")
        var = var_tok[1]
        bounded = False
        if self.peek()[0] == "in":
            self.eat()
            self.eat("X")
            bounded = True
        body = self.formula()
        if kind == "exists":
            return ExistsO(var, AndO(Member(var), body) if bounded else body)
        inner = o_impl(Member(var), body) if bounded else body
        return o_forall(var, inner)

    def atom(self):
        kind, value, pos = self.peek()
        if kind == "(":
            self.eat()
            inner = self.formula()
            self.eat(")")
            return inner
        if kind == "name":
            self.eat()
            nxt, payload, npos = self.peek()
            if nxt == "in":
                self.eat()
                self.eat("X")
                return Member(value)
            if nxt == "ge":
                self.eat()
                player, ctx = payload
                right = self.eat("name")[1]
                return Cmp(player, value, ctx, right)
            if nxt == "gt":
                self.eat()
                player, ctx = payload
                right = self.eat("name")[1]
                return NotO(Cmp(player, right, ctx, value))
            raise LogicParseError("expected 'in X' or a comparison", npos)
        raise LogicParseError(f"unexpected {kind!r}", pos)


def parse_lo(text):
    parser = _LoParser(text)
    node = parser.formula()
    parser.eat("end")
    return node


def lo_free_vars(f):
    if isinstance(f, Member):
        return {f.var}
    if isinstance(f, Cmp):
        return {f.left, f.ctx, f.right}
    if isinstance(f, NotO):
        return lo_free_vars(f.sub)
    if isinstance(f, AndO):
        return lo_free_vars(f.left) | lo_free_vars(f.right)
    if isinstance(f, ExistsO):
        return lo_free_vars(f.body) - {f.var}
    raise TypeError(f"not a formula: {f!r}")


def check_positive_lo(f, parity=0):
    """Positive: every set-variable occurrence under an even number of '!'."""
    if isinstance(f, Member):
        return parity % 2 == 0
    if isinstance(f, Cmp):
        return True
    if isinstance(f, NotO):
        return check_positive_lo(f.sub, parity + 1)
    if isinstance(f, AndO):
        return check_positive_lo(f.left, parity) and check_positive_lo(f.right, parity)
    if isinstance(f, ExistsO):
        return check_positive_lo(f.body, parity)
    raise TypeError(f"not a formula: {f!r}")


def eval_lo(model, f, assignment, X):
    """Satisfaction at an assignment of states to variables and an event to X."""

    def ev(f, asg):
        if isinstance(f, Member):
            if f.var not in asg:
                raise LogicEvalError(f"unbound variable {f.var!r}")
            return asg[f.var] in X
        if isinstance(f, Cmp):
            for v in (f.left, f.ctx, f.right):
                if v not in asg:
                    raise LogicEvalError(f"unbound variable {v!r}")
            game = model.game
            i = f.player
            wz = asg[f.ctx]
            ctx = tuple(
                model.strategy_of(j, wz) for j in range(game.n) if j != i
            )
            a = game.payoff(i, full_profile(i, model.strategy_of(i, asg[f.left]), ctx))
            b = game.payoff(i, full_profile(i, model.strategy_of(i, asg[f.right]), ctx))
            return a >= b
        if isinstance(f, NotO):
            return not ev(f.sub, asg)
        if isinstance(f, AndO):
            return ev(f.left, asg) and ev(f.right, asg)
        if isinstance(f, ExistsO):
            for w in model.states():
                asg2 = dict(asg)
                asg2[f.var] = w
                if ev(f.body, asg2):
                    return True
            return False
        raise TypeError(f"not a formula: {f!r}")

    return ev(f, dict(assignment))


LO_TEXTS = {
    "sd_l": "forall y in X exists z in X x >=^{p}_z y",
    "sd_g": "forall y exists z in X x >=^{p}_z y",
    "wd_l": "forall y in X ((forall z in X x >=^{p}_z y) | (exists z in X x >^{p}_z y))",
    "wd_g": "forall y ((forall z in X x >=^{p}_z y) | (exists z in X x >^{p}_z y))",
    "br_l": "exists z in X forall y in X x >=^{p}_z y",
    "br_g": "exists z in X forall y x >=^{p}_z y",
}


def lo_text(name, i):
    return LO_TEXTS[name].format(p=i + 1)


def compile_lo_to_property(formula, game, i, name="compiled"):
    """Turn an optimality condition into a property for player i.

    The free variable picks the strategy (through any state carrying it) and
    X is the product event of the restriction on the standard model of the
    full game.
    """
    from .epistemic import event_of_restriction, standard_model
    from .optimality import OptimalityProperty

    if isinstance(formula, str):
        formula = parse_lo(formula)
    for node in _lo_walk(formula):
        if isinstance(node, Cmp) and node.player != i:
            raise ValueError(
                f"comparison for player {node.player + 1} in a condition for player {i + 1}"
            )
    free = lo_free_vars(formula)
    if len(free) != 1:
        raise ValueError(f"need exactly one free variable, found {sorted(free)}")
    (pivot,) = free
    if _free_member_or_ctx(formula, pivot, set()):
        raise ValueError(
            f"free variable {pivot!r} may only appear on the sides of comparisons"
        )

    model = standard_model(game.full_restriction())
    state_of = {}
    for w in model.states():
        state_of.setdefault(model.strategy_of(i, w), w)

    def evaluator(s, G):
        X = event_of_restriction(model, G)
        return eval_lo(model, formula, {pivot: state_of[s]}, X)

    return OptimalityProperty(name, i, game, evaluator, "compiled")


def _lo_walk(f):
    yield f
    if isinstance(f, NotO):
        yield from _lo_walk(f.sub)
    elif isinstance(f, AndO):
        yield from _lo_walk(f.left)
        yield from _lo_walk(f.right)
    elif isinstance(f, ExistsO):
        yield from _lo_walk(f.body)


def _free_member_or_ctx(f, pivot, bound):
    """Does the pivot occur free in a membership atom or a context slot?

    Such occurrences would make the compiled property depend on which state
    carries the strategy, so they are rejected.
    """
    if isinstance(f, Member):
        return f.var == pivot and pivot not in bound
    if isinstance(f, Cmp):
        return f.ctx == pivot and pivot not in bound
    if isinstance(f, NotO):
        return _free_member_or_ctx(f.sub, pivot, bound)
    if isinstance(f, AndO):
        return _free_member_or_ctx(f.left, pivot, bound) or _free_member_or_ctx(
            f.right, pivot, bound
        )
    if isinstance(f, ExistsO):
        return _free_member_or_ctx(f.body, pivot, bound | {f.var})
    raise TypeError(f"not a formula: {f!r}")


# ---------- derivations ----------


class DerivationFormatError(ValueError):
    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


@dataclass(frozen=True)
class AxiomStep:
    rule: str  # ratDis or nuDis
    psi: object


@dataclass(frozen=True)
class PropStep:
    premises: tuple
    conclusion: object


@dataclass(frozen=True)
class NuIndStep:
    premise: int
    chi: object
    psi: object


@dataclass(frozen=True)
class StepReport:
    index: int
    ok: bool
    formula: Optional[object]
    reason: str = ""


@dataclass(frozen=True)
class DerivationReport:
    valid: bool
    steps: tuple


_AXIOM_RE = re.compile(r"^axiom\s+(ratDis|nuDis)\s+psi=(.*)$")
_PROP_RE = re.compile(r"^prop\s+from=([0-9]+(?:,[0-9]+)*)\s+conclude=(.*)$")
_NUIND_RE = re.compile(r"^nuInd\s+from=([0-9]+)\s+chi=(.*?)\s+psi=(.*)$")


def parse_derivation(text):
    steps = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.split("#", 1)[0].strip()
        if not stripped:
            continue
        try:
            m = _AXIOM_RE.match(stripped)
            if m:
                steps.append(AxiomStep(m.group(1), parse_lnu(m.group(2))))
                continue
            m = _PROP_RE.match(stripped)
            if m:
                premises = tuple(int(tok) for tok in m.group(1).split(","))
                steps.append(PropStep(premises, parse_lnu(m.group(2))))
                continue
            m = _NUIND_RE.match(stripped)
            if m:
                steps.append(
                    NuIndStep(
                        int(m.group(1)), parse_lnu(m.group(2)), parse_lnu(m.group(3))
                    )
                )
                continue
        except LogicParseError as exc:
            raise DerivationFormatError(str(exc), lineno) from None
        raise DerivationFormatError(f"unrecognized step {stripped!r}", lineno)
    if not steps:
        raise DerivationFormatError("empty derivation")
    return tuple(steps)


_ATOM_CAP = 16


def _prop_atoms(f, acc):
    if isinstance(f, NotF):
        _prop_atoms(f.sub, acc)
    elif isinstance(f, AndF):
        _prop_atoms(f.left, acc)
        _prop_atoms(f.right, acc)
    else:
        if f not in acc:
            acc.append(f)


def _prop_value(f, values):
    if isinstance(f, NotF):
        return not _prop_value(f.sub, values)
    if isinstance(f, AndF):
        return _prop_value(f.left, values) and _prop_value(f.right, values)
    return values[f]


def propositional_consequence(premises, conclusion):
    """Truth-table entailment treating modal and fixpoint subformulas as atoms."""
    atoms = []
    for f in list(premises) + [conclusion]:
        _prop_atoms(f, atoms)
    if len(atoms) > _ATOM_CAP:
        raise BudgetExceededError(f"{len(atoms)} propositional atoms exceed the cap")
    for bits in range(2 ** len(atoms)):
        values = {a: bool(bits >> k & 1) for k, a in enumerate(atoms)}
        if all(_prop_value(p, values) for p in premises) and not _prop_value(
            conclusion, values
        ):
            return False
    return True


def _nu_wellformed(psi):
    if contains_nu(psi):
        return "fixpoint body contains a nested fixpoint"
    if not var_positive(psi):
        return "fixpoint variable occurs negatively in the body"
    return None


def check_derivation(steps):
    """Validate every step; a derivation is valid when all steps are."""
    derived = []
    reports = []
    for k, step in enumerate(steps, start=1):

        def fail(reason):
            reports.append(StepReport(k, False, None, reason))
            derived.append(None)

        if isinstance(step, AxiomStep):
            if step.rule == "ratDis":
                if has_free_var(step.psi):
                    fail("ratDis instance has a free fixpoint variable")
                    continue
                formula = impl(
                    Rat(None), impl(Box(None, step.psi), Opt(None, step.psi))
                )
            else:
                reason = _nu_wellformed(step.psi)
                if reason:
                    fail(f"nuDis: {reason}")
                    continue
                formula = impl(Nu(step.psi), subst(step.psi, Nu(step.psi)))
            derived.append(formula)
            reports.append(StepReport(k, True, formula))
        elif isinstance(step, PropStep):
            bad = [j for j in step.premises if not 1 <= j < k or derived[j - 1] is None]
            if bad:
                fail(f"premise {bad[0]} is not an earlier valid step")
                continue
            if has_free_var(step.conclusion):
                fail("conclusion has a free fixpoint variable")
                continue
            premises = [derived[j - 1] for j in step.premises]
            if not propositional_consequence(premises, step.conclusion):
                fail("conclusion is not a propositional consequence of the premises")
                continue
            derived.append(step.conclusion)
            reports.append(StepReport(k, True, step.conclusion))
        elif isinstance(step, NuIndStep):
            j = step.premise
            if not 1 <= j < k or derived[j - 1] is None:
                fail(f"premise {j} is not an earlier valid step")
                continue
            if has_free_var(step.chi):
                fail("chi has a free fixpoint variable")
                continue
            reason = _nu_wellformed(step.psi)
            if reason:
                fail(f"nuInd: {reason}")
                continue
            expected = impl(step.chi, subst(step.psi, step.chi))
            if derived[j - 1] != expected:
                fail(
                    f"premise must be {pretty(expected)}, "
                    f"found {pretty(derived[j - 1])}"
                )
                continue
            formula = impl(step.chi, Nu(step.psi))
            derived.append(formula)
            reports.append(StepReport(k, True, formula))
        else:
            fail(f"unknown step type {type(step).__name__}")
    return DerivationReport(all(r.ok for r in reports), tuple(reports))
