"""Two-phase primal simplex over Fractions with Bland's rule.

Works on :class:`~sptpoa.lp.LinearProgram` objects: every variable is free,
every restriction (including sign restrictions) is an explicit row.
Free variables are split as x = x+ - x-.
"""
from __future__ import annotations

from fractions import Fraction

ZERO = Fraction(0)


def _flip(rel):
    return {"<=": ">=", ">=": "<=", "=": "="}[rel]


class _Tableau:
    """Dense tableau holding B^-1 A and B^-1 b for a max problem."""

    def __init__(self, rows, rhs, ncols, basis):
        self.T = rows
        self.b = rhs
        self.ncols = ncols
        self.basis = basis

    def pivot(self, r, q):
        T, b = self.T, self.b
        piv = T[r][q]
        T[r] = [v / piv for v in T[r]]
        b[r] /= piv
        for k in range(len(T)):
            if k != r and T[k][q] != 0:
                f = T[k][q]
                rowr = T[r]
                T[k] = [a - f * c for a, c in zip(T[k], rowr)]
                b[k] -= f * b[r]
        self.basis[r] = q

    def reduced_costs(self, cost, allowed):
        cb = [cost[j] for j in self.basis]
        out = {}
        for j in allowed:
            out[j] = cost[j] - sum((cb[r] * self.T[r][j] for r in range(len(self.T)) if cb[r]), ZERO)
        return out

    def run(self, cost, allowed, max_iter):
        """Bland's rule: lowest-index improving column, lowest-index leaving basic."""
        for _ in range(max_iter):
            d = self.reduced_costs(cost, allowed)
            entering = next((j for j in sorted(allowed) if d[j] > 0), None)
            if entering is None:
                return "optimal", None
            best, leave = None, None
            for r, row in enumerate(self.T):
                a = row[entering]
                if a > 0:
                    ratio = self.b[r] / a
                    key = (ratio, self.basis[r])
                    if best is None or key < best:
                        best, leave = key, r
            if leave is None:
                return "unbounded", entering
            self.pivot(leave, entering)
        raise RuntimeError("simplex iteration limit reached")

    def multipliers(self, cost, unit_cols):
        """Row multipliers y = c_B B^-1, read off the initial identity columns."""
        cb = [cost[j] for j in self.basis]
        return [
            sum((cb[r] * self.T[r][u] for r in range(len(self.T)) if cb[r]), ZERO)
            for u in unit_cols
        ]


def solve(lp, max_iter=100_000):
    from .lp import LpSolution

    nv = len(lp.variables)
    sign = 1 if lp.sense == "max" else -1
    rows, rels, rhs, flips = [], [], [], []
    for con in lp.constraints:
        a, rel, b = list(con.coefficients), con.relation, con.rhs
        sigma = 1
        if b < 0:
            a, rel, b, sigma = [-v for v in a], _flip(rel), -b, -1
        rows.append(a)
        rels.append(rel)
        rhs.append(b)
        flips.append(sigma)
    mrows = len(rows)

    # columns: x+ | x- | slack/surplus per inequality | artificial where needed
    ncol = 2 * nv
    slack_col, art_col = {}, {}
    for r, rel in enumerate(rels):
        if rel != "=":
            slack_col[r] = ncol
            ncol += 1
    for r, rel in enumerate(rels):
        if rel != "<=":
            art_col[r] = ncol
            ncol += 1
    T = []
    basis = []
    unit_cols = []
    for r in range(mrows):
        row = [ZERO] * ncol
        for k, v in enumerate(rows[r]):
            row[k] = Fraction(v)
            row[nv + k] = -Fraction(v)
        if r in slack_col:
            row[slack_col[r]] = Fraction(1 if rels[r] == "<=" else -1)
        if r in art_col:
            row[art_col[r]] = Fraction(1)
            basis.append(art_col[r])
            unit_cols.append(art_col[r])
        else:
            basis.append(slack_col[r])
            unit_cols.append(slack_col[r])
        T.append(row)
    tab = _Tableau(T, [Fraction(v) for v in rhs], ncol, basis)
    artificial = set(art_col.values())
    structural = [j for j in range(ncol) if j not in artificial]

    # phase 1: maximise minus the sum of artificials
    if artificial:
        cost1 = [ZERO] * ncol
        for j in artificial:
            cost1[j] = Fraction(-1)
        tab.run(cost1, list(range(ncol)), max_iter)
        phase1 = -sum((tab.b[r] for r in range(mrows) if tab.basis[r] in artificial), ZERO)
        if phase1 < 0:
            y = tab.multipliers(cost1, unit_cols)
            farkas = [flips[r] * y[r] for r in range(mrows)]
            return LpSolution("infeasible", None, None, None, certificate=farkas)
        for r in range(mrows):
            if tab.basis[r] in artificial:
                q = next((j for j in structural if tab.T[r][j] != 0), None)
                if q is not None:
                    tab.pivot(r, q)
                # otherwise the row is redundant; its artificial stays basic at zero

    cost = [ZERO] * ncol
    for k, c in enumerate(lp.objective):
        cost[k] = sign * Fraction(c)
        cost[nv + k] = -sign * Fraction(c)
    status, entering = tab.run(cost, structural, max_iter)

    value_of = [ZERO] * ncol
    for r, j in enumerate(tab.basis):
        value_of[j] = tab.b[r]
    x = [value_of[k] - value_of[nv + k] for k in range(nv)]

    if status == "unbounded":
        d = [ZERO] * ncol
        d[entering] = Fraction(1)
        for r, j in enumerate(tab.basis):
            d[j] = -tab.T[r][entering]
        ray = [d[k] - d[nv + k] for k in range(nv)]
        return LpSolution("unbounded", None, x, None, certificate=ray)

    y = tab.multipliers(cost, unit_cols)
    dual = [sign * flips[r] * y[r] for r in range(mrows)]
    value = sum((Fraction(c) * v for c, v in zip(lp.objective, x)), ZERO)
    return LpSolution("optimal", value, x, dual)
