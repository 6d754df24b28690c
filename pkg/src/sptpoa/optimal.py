"""Optimal schedules: the MFT greedy, an exact optimality test, and oracles."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Optional

from .errors import GuardExceededError, InvariantViolation, PreconditionError
from .model import (
    Instance,
    Schedule,
    assignments,
    check_schedule,
    require_canonical,
    scaled_integers,
)

DEFAULT_GUARD = 10**6


class Check(NamedTuple):
    """Outcome of a structural check; ``witness`` is None when ``ok``."""

    ok: bool
    witness: object = None


@dataclass(frozen=True)
class Assignment:
    job: int
    machine: int
    positional_value: Fraction


@dataclass(frozen=True)
class MftTrace:
    schedule: Schedule
    assignment_order: tuple[Assignment, ...]

    def to_json(self):
        return [
            {"job": a.job, "machine": a.machine, "positional_value": str(a.positional_value)}
            for a in self.assignment_order
        ]


@dataclass(frozen=True)
class OptimalityWitness:
    """Slot on machine ``i`` is strictly better than the slot job ``j`` holds on ``l``."""

    i: int
    l: int
    j: int
    free_value: Fraction
    used_value: Fraction


def mft_schedule(instance: Instance) -> MftTrace:
    """Assign jobs n, n-1, ..., 1 to the machine of least (psi + 1) / s.

    Ties go to the highest machine index.  The result is checked with
    :func:`is_optimal` before it is returned.
    """
    require_canonical(instance)
    m = instance.m
    count = [0] * m
    tau = [0] * instance.n
    order = []
    for j in range(instance.n, 0, -1):
        best, best_i = None, None
        for i in range(m, 0, -1):
            v = Fraction(count[i - 1] + 1) / instance.speed(i)
            if best is None or v < best:
                best, best_i = v, i
        tau[j - 1] = best_i
        count[best_i - 1] += 1
        order.append(Assignment(j, best_i, best))
    trace = MftTrace(Schedule(tuple(tau)), tuple(order))
    verdict = is_optimal(instance, trace.schedule)
    if not verdict.ok:
        raise InvariantViolation(f"MFT output {trace.schedule} failed the optimality test: {verdict.witness}")
    return trace


def is_optimal(instance: Instance, schedule: Schedule) -> Check:
    """Exact optimality test by positional values.

    Jobs are taken in decreasing order of processing time, one group of equal
    times at a time.  Given the slots already held by larger jobs, a group is
    placed optimally iff its worst occupied slot is no worse than the best
    slot it leaves free on any machine:

        (psi_i + 1) / s_i  >=  psi_l / s_l

    where psi_l counts the group's own jobs too.  Jobs with p = 0 contribute
    nothing and are not constrained.
    """
    require_canonical(instance)
    check_schedule(instance, schedule)
    m, p = instance.m, instance.processing
    above = [0] * m
    hi = instance.n
    while hi >= 1:
        lo = hi
        while lo > 1 and p[lo - 2] == p[hi - 1]:
            lo -= 1
        group = range(lo, hi + 1)
        held = [0] * m
        for k in group:
            held[schedule[k] - 1] += 1
        if p[hi - 1] > 0:
            used, l = max(
                (Fraction(above[i] + held[i], instance.speeds[i]), i + 1)
                for i in range(m)
                if held[i]
            )
            free, i = min(
                (Fraction(above[i] + held[i] + 1, instance.speeds[i]), i + 1) for i in range(m)
            )
            if free < used:
                j = min(k for k in group if schedule[k] == l)
                return Check(False, OptimalityWitness(i, l, j, free, used))
        for i in range(m):
            above[i] += held[i]
        hi = lo - 1
    return Check(True)


def brute_force_optimal(instance: Instance, guard: int = DEFAULT_GUARD):
    """Minimum social cost and every schedule attaining it, by full enumeration."""
    require_canonical(instance)
    n, m = instance.n, instance.m
    if m**n > guard:
        raise GuardExceededError(
            f"{m}^{n} = {m**n} assignments exceed the guard {guard}; use mft_schedule instead"
        )
    P, W, scale = scaled_integers(instance)
    best, argmin = None, []
    for tau in assignments(n, m):
        after = [0] * m
        cost = 0
        for j in range(n - 1, -1, -1):
            i = tau[j] - 1
            after[i] += 1
            cost += P[j] * after[i] * W[i]
        if best is None or cost < best:
            best, argmin = cost, [tau]
        elif cost == best:
            argmin.append(tau)
    return Fraction(best, scale), [Schedule(t) for t in argmin]


def block_star(instance: Instance, trace: MftTrace) -> frozenset[int]:
    """Largest jobs MFT puts on the fastest machine before it uses any other."""
    m = instance.m
    block = []
    for a in trace.assignment_order:
        if a.machine != m:
            break
        block.append(a.job)
    return frozenset(block)


def check_consecutive_property(instance: Instance, schedule: Schedule) -> Check:
    """Two consecutive jobs never share a machine other than the fastest.

    Returns the offending job k (with k - 1 on the same machine) on failure.
    """
    verdict = is_optimal(instance, schedule)
    if not verdict.ok:
        raise PreconditionError(f"{schedule} is not optimal ({verdict.witness})")
    m = instance.m
    for k in range(2, instance.n + 1):
        if schedule[k] != m and schedule[k - 1] == schedule[k]:
            return Check(False, k)
    return Check(True)
