"""The equilibrium-versus-optimum linear programs and their duals.

For an optimal schedule ``opt`` and an equilibrium ``ne`` the primal LP
chooses processing times p_1..p_n to maximise the equilibrium cost while the
optimal cost is pinned to 1 and ``ne`` stays stable against moving each job
to its ``opt`` machine.  The ``sum`` variant keeps one aggregated stability
row, the ``weak`` variant one row per job.

Conventions: all variables are free; every restriction, sign restrictions
included, is an explicit row.  The duals are written with z_0 = z_n = 0
folded away rather than kept as variables.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Optional, Sequence

from . import simplex
from .errors import ValidationError
from .model import Instance, Schedule, check_schedule, rational

RELATIONS = ("<=", "=", ">=")
VARIANTS = ("primal-weak", "primal-sum", "dual-weak", "dual-sum")


@dataclass(frozen=True)
class Constraint:
    coefficients: tuple[Fraction, ...]
    relation: str
    rhs: Fraction
    name: str = ""

    def __post_init__(self):
        if self.relation not in RELATIONS:
            raise ValidationError(f"unknown relation {self.relation!r}")
        object.__setattr__(self, "coefficients", tuple(Fraction(c) for c in self.coefficients))
        object.__setattr__(self, "rhs", Fraction(self.rhs))

    def lhs(self, point: Sequence[Fraction]) -> Fraction:
        return sum((a * x for a, x in zip(self.coefficients, point)), Fraction(0))

    def slack(self, point: Sequence[Fraction]) -> Fraction:
        """Oriented so that the row holds iff the slack is >= 0 (== 0 for equalities)."""
        v = self.lhs(point)
        return self.rhs - v if self.relation == "<=" else v - self.rhs

    def holds(self, point) -> bool:
        s = self.slack(point)
        return s == 0 if self.relation == "=" else s >= 0


@dataclass(frozen=True)
class LinearProgram:
    sense: str
    variables: tuple[str, ...]
    objective: tuple[Fraction, ...]
    constraints: tuple[Constraint, ...]
    variant: Optional[str] = None

    def __post_init__(self):
        if self.sense not in ("max", "min"):
            raise ValidationError(f"sense must be 'max' or 'min', got {self.sense!r}")
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "objective", tuple(Fraction(c) for c in self.objective))
        object.__setattr__(self, "constraints", tuple(self.constraints))
        k = len(self.variables)
        if len(self.objective) != k:
            raise ValidationError(f"objective has {len(self.objective)} entries for {k} variables")
        for c in self.constraints:
            if len(c.coefficients) != k:
                raise ValidationError(
                    f"row {c.name or '?'} has {len(c.coefficients)} coefficients for {k} variables"
                )

    def row(self, name: str) -> Constraint:
        return next(c for c in self.constraints if c.name == name)

    def objective_value(self, point) -> Fraction:
        return sum((c * x for c, x in zip(self.objective, point)), Fraction(0))

    def to_json(self):
        return {
            "sense": self.sense,
            "variant": self.variant,
            "variables": list(self.variables),
            "objective": [str(c) for c in self.objective],
            "constraints": [
                {
                    "name": c.name,
                    "coefficients": [str(a) for a in c.coefficients],
                    "relation": c.relation,
                    "rhs": str(c.rhs),
                }
                for c in self.constraints
            ],
        }

    @classmethod
    def from_json(cls, data):
        return cls(
            data["sense"],
            tuple(data["variables"]),
            tuple(rational(v, "objective") for v in data["objective"]),
            tuple(
                Constraint(
                    tuple(rational(a, "coefficient") for a in row["coefficients"]),
                    row["relation"],
                    rational(row["rhs"], "rhs"),
                    row.get("name", ""),
                )
                for row in data["constraints"]
            ),
            data.get("variant"),
        )

    def render(self) -> str:
        """Human-readable form, one row per line."""

        def expr(coeffs):
            terms = []
            for a, v in zip(coeffs, self.variables):
                if a == 0:
                    continue
                mag = "" if abs(a) == 1 else f"{abs(a)}*"
                terms.append(("- " if a < 0 else "+ ") + mag + v)
            if not terms:
                return "0"
            text = " ".join(terms)
            return text[2:] if text.startswith("+ ") else "-" + text[2:]

        lines = [f"{self.sense} {expr(self.objective)}"]
        for c in self.constraints:
            lines.append(f"  {c.name:>10}: {expr(c.coefficients)} {c.relation} {c.rhs}")
        return "\n".join(lines)


@dataclass
class LpSolution:
    status: str
    value: Optional[Fraction]
    primal_point: Optional[list[Fraction]]
    dual_point: Optional[list[Fraction]]
    certificate: Optional[list[Fraction]] = None

    def to_json(self):
        enc = lambda xs: None if xs is None else [str(v) for v in xs]
        return {
            "status": self.status,
            "value": None if self.value is None else str(self.value),
            "primal_point": enc(self.primal_point),
            "dual_point": enc(self.dual_point),
            "certificate": enc(self.certificate),
        }


class FeasibilityCheck(NamedTuple):
    feasible: bool
    slacks: list[Fraction]


def _check_roles(instance: Instance, opt: Schedule, ne: Schedule, variant: str):
    check_schedule(instance, opt)
    check_schedule(instance, ne)
    if variant not in ("weak", "sum"):
        raise ValidationError(f"variant must be 'weak' or 'sum', got {variant!r}")


def _inv_speed(instance: Instance, machine: int) -> Fraction:
    return 1 / instance.speed(machine)


def build_primal(instance: Instance, opt: Schedule, ne: Schedule, variant: str = "sum") -> LinearProgram:
    """Primal LP over p_1..p_n, expanded term by term from completion-time sums.

    Row order: normalisation, stability (one row, or one per job), the n - 1
    SPT rows p_j - p_{j+1} <= 0, and -p_1 <= 0.
    """
    _check_roles(instance, opt, ne, variant)
    n = instance.n
    jobs = range(1, n + 1)

    def completion_row(tau):
        row = [Fraction(0)] * n
        for j in jobs:
            for k in range(1, j + 1):
                if tau[k] == tau[j]:
                    row[k - 1] += _inv_speed(instance, tau[j])
        return row

    def stability_row(j):
        # C_j(ne) minus the time j would finish on its opt machine, others fixed
        row = [Fraction(0)] * n
        own, target = ne[j], opt[j]
        row[j - 1] += _inv_speed(instance, own) - _inv_speed(instance, target)
        for k in range(1, j):
            if ne[k] == own:
                row[k - 1] += _inv_speed(instance, own)
            if ne[k] == target:
                row[k - 1] -= _inv_speed(instance, target)
        return row

    rows = [Constraint(completion_row(opt), "=", 1, "norm")]
    if variant == "sum":
        total = [Fraction(0)] * n
        for j in jobs:
            total = [a + b for a, b in zip(total, stability_row(j))]
        rows.append(Constraint(total, "<=", 0, "dev"))
    else:
        rows.extend(Constraint(stability_row(j), "<=", 0, f"dev_{j}") for j in jobs)
    for j in range(1, n):
        row = [Fraction(0)] * n
        row[j - 1], row[j] = Fraction(1), Fraction(-1)
        rows.append(Constraint(row, "<=", 0, f"spt_{j}"))
    first = [Fraction(0)] * n
    first[0] = Fraction(-1)
    rows.append(Constraint(first, "<=", 0, "sign_p1"))
    return LinearProgram(
        "max",
        tuple(f"p_{j}" for j in jobs),
        tuple(completion_row(ne)),
        tuple(rows),
        f"primal-{variant}",
    )


def dual_variables(n: int, variant: str) -> tuple[str, ...]:
    ys = ("y",) if variant == "sum" else tuple(f"y_{j}" for j in range(1, n + 1))
    return ("beta",) + ys + tuple(f"z_{k}" for k in range(1, n))


def build_dual(instance: Instance, opt: Schedule, ne: Schedule, variant: str = "sum") -> LinearProgram:
    """Dual LP: minimise beta subject to one covering row per job.

    Row for job k (``y_j`` all equal to ``y`` in the sum variant)::

        beta/s(opt_k) * #{j >= k : opt_j = opt_k}
          + 1/s(ne_k) * sum_{j >= k, ne_j = ne_k} y_j
          - y_k / s(opt_k)
          - 1/s(ne_k) * sum_{j > k, opt_j = ne_k} y_j
          + z_k - z_{k-1}
        >= #{j >= k : ne_j = ne_k} / s(ne_k)

    followed by z_k >= 0 rows and then the y >= 0 rows.
    """
    _check_roles(instance, opt, ne, variant)
    n = instance.n
    names = dual_variables(n, variant)
    index = {v: t for t, v in enumerate(names)}

    def y(j):
        return index["y"] if variant == "sum" else index[f"y_{j}"]

    rows = []
    for k in range(1, n + 1):
        row = [Fraction(0)] * len(names)
        s_opt, s_ne = instance.speed(opt[k]), instance.speed(ne[k])
        row[index["beta"]] += Fraction(sum(1 for j in range(k, n + 1) if opt[j] == opt[k])) / s_opt
        for j in range(k, n + 1):
            if ne[j] == ne[k]:
                row[y(j)] += 1 / s_ne
        row[y(k)] -= 1 / s_opt
        for j in range(k + 1, n + 1):
            if opt[j] == ne[k]:
                row[y(j)] -= 1 / s_ne
        if k <= n - 1:
            row[index[f"z_{k}"]] += 1
        if k >= 2:
            row[index[f"z_{k - 1}"]] -= 1
        rhs = Fraction(sum(1 for j in range(k, n + 1) if ne[j] == ne[k])) / s_ne
        rows.append(Constraint(row, ">=", rhs, f"job_{k}"))
    for k in range(1, n):
        row = [Fraction(0)] * len(names)
        row[index[f"z_{k}"]] = Fraction(1)
        rows.append(Constraint(row, ">=", 0, f"z_{k}>=0"))
    for v in names:
        if v.startswith("y"):
            row = [Fraction(0)] * len(names)
            row[index[v]] = Fraction(1)
            rows.append(Constraint(row, ">=", 0, f"{v}>=0"))
    objective = [Fraction(0)] * len(names)
    objective[index["beta"]] = Fraction(1)
    return LinearProgram("min", names, tuple(objective), tuple(rows), f"dual-{variant}")


def check_point_feasible(lp: LinearProgram, point: Sequence) -> FeasibilityCheck:
    """Evaluate every row exactly at ``point``; feasible iff each row holds."""
    if len(point) != len(lp.variables):
        raise ValidationError(
            f"point has {len(point)} coordinates but the LP has {len(lp.variables)} variables"
        )
    point = [Fraction(v) for v in point]
    slacks = [c.slack(point) for c in lp.constraints]
    feasible = all(c.holds(point) for c in lp.constraints)
    return FeasibilityCheck(feasible, slacks)


def simplex_solve(lp: LinearProgram) -> LpSolution:
    """Exact optimum with primal point and row multipliers.

    ``dual_point[r]`` is the multiplier u_r of row r in  c = sum_r u_r a_r,
    with u_r >= 0 on <= rows and u_r <= 0 on >= rows for a max problem (signs
    reversed for min).  Infeasible problems carry Farkas multipliers u in
    ``certificate``: u_r >= 0 on <= rows, u_r <= 0 on >= rows,
    sum_r u_r a_r = 0 and u . b < 0.  Unbounded ones carry an improving ray.
    """
    return simplex.solve(lp)


def transpose_dual(lp: LinearProgram, nonneg: Sequence[str] = ()) -> LinearProgram:
    """Textbook dual of a max problem, one dual variable per primal row.

    Variables listed in ``nonneg`` are treated as known to be >= 0, so their
    dual rows become >= instead of =.  Dual sign restrictions are emitted as
    explicit rows named ``<row>>=0``.
    """
    if lp.sense != "max":
        raise ValidationError("transpose_dual expects a max problem")
    names = tuple(c.name or f"r{t}" for t, c in enumerate(lp.constraints))
    rows = []
    for k, var in enumerate(lp.variables):
        coeffs = [c.coefficients[k] for c in lp.constraints]
        rel = ">=" if var in nonneg else "="
        rows.append(Constraint(coeffs, rel, lp.objective[k], f"col_{var}"))
    for t, c in enumerate(lp.constraints):
        if c.relation == "=":
            continue
        row = [Fraction(0)] * len(names)
        row[t] = Fraction(1) if c.relation == "<=" else Fraction(-1)
        rows.append(Constraint(row, ">=", 0, f"{names[t]}>=0"))
    return LinearProgram("min", names, tuple(c.rhs for c in lp.constraints), tuple(rows), "transposed")
