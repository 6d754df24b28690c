"""Pure Nash equilibria of the SPT scheduling game and the price of anarchy."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import DegenerateInstanceError, GuardExceededError, InvariantViolation, ValidationError
from .model import (
    Instance,
    Schedule,
    assignments,
    check_schedule,
    completion_times,
    require_canonical,
    scaled_integers,
    social_cost,
)
from .optimal import DEFAULT_GUARD, Check, mft_schedule

DEFAULT_BRANCH_GUARD = 10**5
# compute_poa switches from exhaustive search to Ibarra-Kim above this many profiles
POA_BRUTE_LIMIT = 4096


class TieBreak(enum.Enum):
    LOWEST = "lowest-index"
    HIGHEST = "highest-index"
    ALL = "enumerate-all"


@dataclass(frozen=True)
class Deviation:
    job: int
    machine: int
    current: Fraction
    alternative: Fraction


def _deviation_time(instance: Instance, schedule: Schedule, job: int, machine: int) -> Fraction:
    work = instance.p(job) + sum(
        (instance.p(k) for k in range(1, job) if schedule[k] == machine), Fraction(0)
    )
    return work / instance.speed(machine)


def is_nash(instance: Instance, schedule: Schedule) -> Check:
    """No job can lower its completion time by moving alone to another machine.

    A moving job slots into the target machine by the global order, so only
    jobs with smaller index delay it there.
    """
    require_canonical(instance)
    check_schedule(instance, schedule)
    times = completion_times(instance, schedule)
    for j in range(1, instance.n + 1):
        for i in range(1, instance.m + 1):
            if i == schedule[j]:
                continue
            alt = _deviation_time(instance, schedule, j, i)
            if alt < times[j - 1]:
                return Check(False, Deviation(j, i, times[j - 1], alt))
    return Check(True)


def ibarra_kim(instance: Instance, policy: TieBreak = TieBreak.ALL,
               guard: int = DEFAULT_BRANCH_GUARD) -> list[Schedule]:
    """Greedy in SPT order: each job joins a machine where it finishes earliest.

    With ``TieBreak.ALL`` every tie is branched on (machines in ascending
    order) and all resulting schedules are returned, sorted.  Deterministic
    policies return a single schedule.
    """
    require_canonical(instance)
    P, W, _ = scaled_integers(instance)
    n, m = instance.n, instance.m
    results = []

    def extend(j, load, tau):
        if j == n:
            results.append(Schedule(tuple(tau)))
            if len(results) > guard:
                raise GuardExceededError(f"Ibarra-Kim branching exceeded {guard} leaves")
            return
        finish = [(load[i] + P[j]) * W[i] for i in range(m)]
        best = min(finish)
        tied = [i for i in range(m) if finish[i] == best]
        if policy is TieBreak.LOWEST:
            tied = tied[:1]
        elif policy is TieBreak.HIGHEST:
            tied = tied[-1:]
        for i in tied:
            load[i] += P[j]
            tau.append(i + 1)
            extend(j + 1, load, tau)
            tau.pop()
            load[i] -= P[j]

    extend(0, [0] * m, [])
    return sorted(results, key=lambda s: s.assignment)


def brute_force_nash(instance: Instance, guard: int = DEFAULT_GUARD) -> list[Schedule]:
    """Every assignment passing the equilibrium test, in lexicographic order."""
    require_canonical(instance)
    n, m = instance.n, instance.m
    if m**n > guard:
        raise GuardExceededError(f"{m}^{n} = {m**n} assignments exceed the guard {guard}")
    P, W, _ = scaled_integers(instance)
    found = []
    for tau in assignments(n, m):
        load = [0] * m
        stable = True
        for j in range(n):
            # load holds jobs before j only, which is exactly what delays j anywhere
            own = (load[tau[j] - 1] + P[j]) * W[tau[j] - 1]
            if any((load[i] + P[j]) * W[i] < own for i in range(m)):
                stable = False
                break
            load[tau[j] - 1] += P[j]
        if stable:
            found.append(Schedule(tau))
    return found


def is_divisible_speeds(instance: Instance) -> bool:
    s = instance.speeds
    return all((a / b).denominator == 1 for a in s for b in s if a >= b)


def bound_formula(m: int, divisible: bool = False) -> Fraction:
    """Smallest proven upper bound on the pure price of anarchy for m machines."""
    if m < 1:
        raise ValidationError(f"need at least one machine, got m={m}")
    if m == 1:
        return Fraction(1)  # a single schedule exists
    bounds = [2 - Fraction(1, 2 * (2 * m - 1))]
    if m == 2:
        bounds.append(Fraction(3, 2))
    if divisible:
        bounds.append(2 - Fraction(1, 2 * m))
    return min(bounds)


@dataclass
class PoaReport:
    optimal_cost: Fraction
    optimal_schedule: Schedule
    equilibrium_costs: list[tuple[Schedule, Fraction]]
    poa: Fraction
    bound: Fraction
    bound_satisfied: bool
    method: str = "brute-force"
    notes: list[str] = field(default_factory=list)

    @property
    def worst_equilibrium(self) -> Schedule:
        return max(self.equilibrium_costs, key=lambda sc: (sc[1], sc[0].assignment))[0]

    def to_json(self):
        return {
            "optimal_cost": str(self.optimal_cost),
            "optimal_schedule": list(self.optimal_schedule),
            "equilibria": [
                {"assignment": list(s), "social_cost": str(c)} for s, c in self.equilibrium_costs
            ],
            "poa": str(self.poa),
            "bound": str(self.bound),
            "bound_satisfied": self.bound_satisfied,
            "method": self.method,
            "notes": list(self.notes),
        }


def nash_set(instance: Instance, method: str = "auto") -> tuple[list[Schedule], str]:
    if method == "auto":
        method = "brute-force" if instance.m**instance.n <= POA_BRUTE_LIMIT else "ibarra-kim"
    if method == "brute-force":
        return brute_force_nash(instance), method
    if method == "ibarra-kim":
        return ibarra_kim(instance, TieBreak.ALL), method
    raise ValidationError(f"unknown equilibrium method {method!r}")


def compute_poa(instance: Instance, method: str = "auto") -> PoaReport:
    """Price of anarchy of one instance: worst equilibrium cost over optimal cost.

    The equilibrium set comes from exhaustive search on small instances and
    from Ibarra-Kim with all tie branches otherwise; the two coincide.
    """
    require_canonical(instance)
    opt = mft_schedule(instance).schedule
    opt_cost = social_cost(instance, opt)
    if opt_cost == 0:
        raise DegenerateInstanceError(f"{instance} has zero optimal cost; the ratio is undefined")
    equilibria, used = nash_set(instance, method)
    if not equilibria:
        raise InvariantViolation(f"no pure equilibrium found for {instance}")
    costs = [(s, social_cost(instance, s)) for s in equilibria]
    worst = max(c for _, c in costs)
    poa = worst / opt_cost
    bound = bound_formula(instance.m, is_divisible_speeds(instance))
    return PoaReport(opt_cost, opt, costs, poa, bound, poa <= bound, used)
