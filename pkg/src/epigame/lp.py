"""Exact rational linear programming via two-phase primal simplex.

Small dense tableau, Bland's rule for cycle-free pivoting, every optimum
re-verified by substitution before it is returned.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass(frozen=True)
class Optimal:
    value: Fraction
    point: tuple


class Infeasible:
    def __repr__(self):
        return "Infeasible"


class Unbounded:
    def __repr__(self):
        return "Unbounded"


INFEASIBLE = Infeasible()
UNBOUNDED = Unbounded()


class LinearProgram:
    """maximize objective . x subject to linear constraints and var bounds.

    Variables default to x >= 0; use set_bounds for free or shifted ranges.
    """

    def __init__(self, num_vars, objective):
        objective = [Fraction(c) for c in objective]
        if len(objective) != num_vars:
            raise ValueError("objective length does not match variable count")
        self.num_vars = num_vars
        self.objective = objective
        self.rows = []
        self.lower = [ZERO] * num_vars
        self.upper = [None] * num_vars

    def add(self, coeffs, rel, rhs):
        coeffs = [Fraction(c) for c in coeffs]
        if len(coeffs) != self.num_vars:
            raise ValueError("constraint length does not match variable count")
        if rel not in ("<=", ">=", "="):
            raise ValueError(f"bad relation {rel!r}")
        self.rows.append((coeffs, rel, Fraction(rhs)))

    def set_bounds(self, j, lower, upper):
        self.lower[j] = None if lower is None else Fraction(lower)
        self.upper[j] = None if upper is None else Fraction(upper)


def solve(lp):
    """Solve an LP exactly. Returns Optimal(value, point), INFEASIBLE or UNBOUNDED."""
    # Substitute bounded variables by nonnegative columns.
    col_of = []  # per original var: list of (column, sign)
    shift = []  # per original var: additive constant
    ncols = 0
    extra_rows = []
    for j in range(lp.num_vars):
        lo, up = lp.lower[j], lp.upper[j]
        if lo is not None and up is not None and up < lo:
            return INFEASIBLE
        if lo is not None:
            col_of.append([(ncols, ONE)])
            shift.append(lo)
            if up is not None:
                extra_rows.append((j, up - lo))
            ncols += 1
        elif up is not None:
            col_of.append([(ncols, -ONE)])
            shift.append(up)
            ncols += 1
        else:
            col_of.append([(ncols, ONE), (ncols + 1, -ONE)])
            shift.append(ZERO)
            ncols += 2

    def substitute(coeffs):
        dense = [ZERO] * ncols
        const = ZERO
        for j, c in enumerate(coeffs):
            if c == 0:
                continue
            const += c * shift[j]
            for col, sign in col_of[j]:
                dense[col] += c * sign
        return dense, const

    rows = []  # (dense, rel, rhs) with rel in {<=, =}
    for coeffs, rel, rhs in lp.rows:
        dense, const = substitute(coeffs)
        rhs = rhs - const
        if rel == ">=":
            dense = [-c for c in dense]
            rhs = -rhs
            rel = "<="
        rows.append((dense, rel, rhs))
    for j, cap in extra_rows:
        dense = [ZERO] * ncols
        col = col_of[j][0][0]
        dense[col] = ONE
        rows.append((dense, "<=", cap))

    obj_dense, obj_const = substitute(lp.objective)

    # Assemble tableau columns: structural | slacks | artificials.
    nslack = sum(1 for _, rel, _ in rows if rel == "<=")
    tableau = []
    basis = []
    slack_base = ncols
    art_cols = []
    si = 0
    width = ncols + nslack
    for dense, rel, rhs in rows:
        row = dense + [ZERO] * nslack
        if rel == "<=":
            row[slack_base + si] = ONE
            si += 1
        if rhs < 0:
            row = [-c for c in row]
            rhs = -rhs
        row.append(rhs)
        tableau.append(row)
        basis.append(None)
    for r, row in enumerate(tableau):
        rel = rows[r][1]
        if rel == "<=":
            scol = next(
                (j for j in range(slack_base, width) if row[j] == 1), None
            )
            if scol is not None and all(
                tableau[r2][scol] == 0 for r2 in range(len(tableau)) if r2 != r
            ):
                basis[r] = scol
    for r in range(len(tableau)):
        if basis[r] is None:
            for row in tableau:
                row.insert(-1, ZERO)
            acol = width
            width += 1
            tableau[r][acol] = ONE
            basis[r] = acol
            art_cols.append(acol)

    art_set = set(art_cols)

    def pivot(r, j):
        piv = tableau[r][j]
        tableau[r] = [c / piv for c in tableau[r]]
        for r2 in range(len(tableau)):
            if r2 != r and tableau[r2][j] != 0:
                f = tableau[r2][j]
                tableau[r2] = [a - f * b for a, b in zip(tableau[r2], tableau[r])]
        basis[r] = j

    def run_simplex(costs, banned):
        """Maximize costs . columns with Bland's rule; returns 'optimal' or 'unbounded'."""
        while True:
            duals = [costs[b] for b in basis]
            enter = None
            for j in range(width):
                if j in banned or j in basis:
                    continue
                rc = costs[j] - sum(
                    d * tableau[r][j] for r, d in enumerate(duals) if d != 0
                )
                if rc > 0:
                    enter = j
                    break
            if enter is None:
                return "optimal"
            leave = None
            best = None
            for r in range(len(tableau)):
                a = tableau[r][enter]
                if a > 0:
                    ratio = tableau[r][-1] / a
                    if best is None or ratio < best or (ratio == best and basis[r] < basis[leave]):
                        best = ratio
                        leave = r
            if leave is None:
                return "unbounded"
            pivot(leave, enter)

    if art_cols:
        costs1 = [ZERO] * width
        for j in art_cols:
            costs1[j] = -ONE
        run_simplex(costs1, banned=set())
        value1 = sum(costs1[b] * tableau[r][-1] for r, b in enumerate(basis))
        if value1 != 0:
            return INFEASIBLE
        # Drive remaining artificials out of the basis or drop redundant rows.
        drop = []
        for r in range(len(tableau)):
            if basis[r] in art_set:
                j = next(
                    (j for j in range(width) if j not in art_set and tableau[r][j] != 0),
                    None,
                )
                if j is None:
                    drop.append(r)
                else:
                    pivot(r, j)
        for r in sorted(drop, reverse=True):
            del tableau[r]
            del basis[r]

    costs2 = [ZERO] * width
    for j, c in enumerate(obj_dense):
        costs2[j] = c
    if run_simplex(costs2, banned=art_set) == "unbounded":
        return UNBOUNDED

    y = [ZERO] * width
    for r, b in enumerate(basis):
        y[b] = tableau[r][-1]
    point = []
    for j in range(lp.num_vars):
        x = shift[j]
        for col, sign in col_of[j]:
            x += sign * y[col]
        point.append(x)
    value = sum(c * x for c, x in zip(lp.objective, point))
    _certify(lp, point, value)
    return Optimal(value, tuple(point))


def _certify(lp, point, value):
    """Exact substitution check of a claimed optimum; guards solver bugs."""
    for j, x in enumerate(point):
        if lp.lower[j] is not None and x < lp.lower[j]:
            raise AssertionError("solution violates a lower bound")
        if lp.upper[j] is not None and x > lp.upper[j]:
            raise AssertionError("solution violates an upper bound")
    for coeffs, rel, rhs in lp.rows:
        lhs = sum(c * x for c, x in zip(coeffs, point))
        ok = lhs <= rhs if rel == "<=" else lhs >= rhs if rel == ">=" else lhs == rhs
        if not ok:
            raise AssertionError("solution violates a constraint")
    check = sum(c * x for c, x in zip(lp.objective, point))
    if check != value:
        raise AssertionError("objective value mismatch")
