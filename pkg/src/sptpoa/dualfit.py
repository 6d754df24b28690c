"""Explicit feasible points of the aggregated dual LP.

All three fittings use y = 1 and put positive z mass only on "sub-chains":
runs of jobs that start at the last job of some slower machine in the
canonical MFT schedule and stop just before the next job on the fastest
machine.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Optional

from .equilibrium import bound_formula, is_divisible_speeds
from .errors import PreconditionError, ValidationError
from .model import Instance, Schedule, check_schedule, psi, rational
from .optimal import Check, MftTrace, block_star

log = logging.getLogger(__name__)

FITTINGS = ("two-machine", "general", "divisible")


@dataclass(frozen=True)
class CriticalJobs:
    per_machine: dict          # machine i < m -> last job on i; empty machines omitted
    cr_m: int
    absent: tuple[int, ...] = ()

    def ordered(self) -> list[tuple[int, int]]:
        """(job, machine) pairs of the slower machines' critical jobs, by job index."""
        return sorted((j, i) for i, j in self.per_machine.items())


@dataclass(frozen=True)
class SubChain:
    start: int
    members: tuple[int, ...]
    anchor: int

    @property
    def end(self) -> int:
        return self.members[-1]


@dataclass(frozen=True)
class SubChains:
    chains: tuple[SubChain, ...]

    def anchor_of(self, job: int) -> Optional[int]:
        for c in self.chains:
            if job in c.members:
                return c.anchor
        return None

    def members(self) -> set[int]:
        return {j for c in self.chains for j in c.members}


@dataclass(frozen=True)
class DualFitting:
    beta: Fraction
    y: Fraction
    z: tuple[Fraction, ...]     # z_1..z_{n-1}; z_0 = z_n = 0 implicitly
    provenance: str
    notes: tuple[str, ...] = ()

    def z_at(self, k: int) -> Fraction:
        """z_k with the boundary convention z_0 = z_n = 0."""
        if 1 <= k <= len(self.z):
            return self.z[k - 1]
        return Fraction(0)

    def point(self) -> list[Fraction]:
        """Coordinates in the (beta, y, z_1..z_{n-1}) order of the aggregated dual."""
        return [self.beta, self.y, *self.z]

    def to_json(self):
        return {
            "provenance": self.provenance,
            "beta": str(self.beta),
            "y": str(self.y),
            "z": [str(v) for v in self.z],
            "notes": list(self.notes),
        }


class FitVerdict(NamedTuple):
    feasible: bool
    slacks: list[Fraction]
    tight: list[int]


def _floor(x: Fraction) -> int:
    return math.floor(x)


def critical_jobs(instance: Instance, trace: MftTrace) -> CriticalJobs:
    tau = trace.schedule
    m = instance.m
    per, absent = {}, []
    for i in range(1, m):
        on_i = tau.jobs_on(i)
        if on_i:
            per[i] = max(on_i)
        else:
            absent.append(i)
    return CriticalJobs(per, min(block_star(instance, trace)), tuple(absent))


def sub_chains(instance: Instance, trace: MftTrace, cr: CriticalJobs) -> SubChains:
    """Each chain runs from the smallest uncovered critical job up to the job
    before the next one the optimal schedule places on the fastest machine."""
    tau = trace.schedule
    m, n = instance.m, instance.n
    machine_of = {j: i for j, i in cr.ordered()}
    uncovered = [j for j, _ in cr.ordered()]
    chains = []
    while uncovered:
        start = uncovered[0]
        stop = next(j for j in range(start, n + 1) if tau[j] == m)
        members = tuple(range(start, stop))
        chains.append(SubChain(start, members, machine_of[start]))
        uncovered = [j for j in uncovered if j >= stop]
    return SubChains(tuple(chains))


def make_fitting(instance: Instance, trace: MftTrace, variant: str) -> DualFitting:
    """The dual point used to certify the bound for ``variant``.

    ``two-machine``: beta = 3/2 and a single positive z at the critical job
    n - floor(s).  ``general`` and ``divisible``: z_j = i / (2 s_r D) on a
    sub-chain anchored at machine r, where i is the machine of the latest
    critical job at or before j and D is 2m - 1 or m respectively.
    """
    n, m = instance.n, instance.m
    z = [Fraction(0)] * (n - 1)
    notes = []
    if variant == "two-machine":
        if m != 2:
            raise PreconditionError(f"two-machine fitting needs m = 2, got m = {m}")
        s = instance.speed(2)
        fl = _floor(s)
        k = n - fl
        if k >= 1:
            z[k - 1] = Fraction(fl) / s * Fraction(fl) / (s + fl)
        else:
            notes.append("n <= floor(s): every job is on the fastest machine, all z are zero")
        return DualFitting(Fraction(3, 2), Fraction(1), tuple(z), variant, tuple(notes))

    if variant == "general":
        denom = 2 * m - 1
    elif variant == "divisible":
        if not is_divisible_speeds(instance):
            raise PreconditionError(f"divisible fitting needs divisible speeds, got {instance.speeds}")
        denom = m
    else:
        raise ValidationError(f"unknown fitting {variant!r}; expected one of {FITTINGS}")
    beta = 2 - Fraction(1, 2 * denom)

    cr = critical_jobs(instance, trace)
    if cr.absent:
        notes.append(f"machines without jobs in the optimal schedule: {list(cr.absent)}")
    ordered = cr.ordered()
    machines = [i for _, i in ordered]
    if machines != sorted(machines):
        notes.append(f"critical jobs not monotone in machine index: {ordered}")
        log.warning("critical jobs not monotone in machine index on %s: %s", instance, ordered)
    chains = sub_chains(instance, trace, cr)
    for chain in chains.chains:
        r_speed = instance.speed(chain.anchor)
        for j in chain.members:
            # chain positions are ordered by job index, so take the last critical job <= j
            i = max(mi for cj, mi in ordered if chain.start <= cj <= j)
            if j <= n - 1:
                z[j - 1] = Fraction(i) / (2 * r_speed * denom)
    return DualFitting(beta, Fraction(1), tuple(z), variant, tuple(notes))


def verify_fitting(instance: Instance, opt: Schedule, ne: Schedule, fitting: DualFitting) -> FitVerdict:
    """Slack of every job row of the aggregated dual at the fitting's point.

    Row k, written with psi counts:

        beta (psi_{opt_k}(opt,k) + 1) / s(opt_k)
          + y (psi_{ne_k}(ne,k) + 1) / s(ne_k) - y / s(opt_k)
          - y psi_{ne_k}(opt,k) / s(ne_k) + z_k - z_{k-1}
          - (psi_{ne_k}(ne,k) + 1) / s(ne_k)  >=  0
    """
    check_schedule(instance, opt)
    check_schedule(instance, ne)
    n = instance.n
    if len(fitting.z) != n - 1:
        raise ValidationError(f"fitting has {len(fitting.z)} z values, expected {n - 1}")
    beta, y = fitting.beta, fitting.y
    slacks = []
    for k in range(1, n + 1):
        so, sn = instance.speed(opt[k]), instance.speed(ne[k])
        own_ne = Fraction(psi(ne, ne[k], k) + 1) / sn
        value = (
            beta * (psi(opt, opt[k], k) + 1) / so
            + y * own_ne
            - y / so
            - y * psi(opt, ne[k], k) / sn
            + fitting.z_at(k)
            - fitting.z_at(k - 1)
            - own_ne
        )
        slacks.append(value)
    feasible = all(v >= 0 for v in slacks) and all(v >= 0 for v in fitting.z) and y >= 0
    tight = [k for k, v in enumerate(slacks, 1) if v == 0]
    return FitVerdict(feasible, slacks, tight)


def applicable_fittings(instance: Instance) -> list[str]:
    out = []
    if instance.m == 2:
        out.append("two-machine")
    out.append("general")
    if is_divisible_speeds(instance):
        out.append("divisible")
    return out


def check_floor_lemma(a, b) -> bool:
    """a / (2b) <= floor(a / b) for a >= b >= 1."""
    a, b = rational(a, "a"), rational(b, "b")
    if not a >= b >= 1:
        raise PreconditionError(f"need a >= b >= 1, got a={a}, b={b}")
    return a / (2 * b) <= _floor(a / b)


def check_half_bound(s) -> bool:
    """floor(s) / (s + floor(s)) <= 1/2 for s >= 1."""
    s = rational(s, "s")
    if s < 1:
        raise PreconditionError(f"need s >= 1, got {s}")
    fl = _floor(s)
    return Fraction(fl) / (s + fl) <= Fraction(1, 2)


def check_subchain_endpoint(instance: Instance, trace: MftTrace, chains: SubChains) -> Check:
    """The fastest-machine job right after a chain has floor(s_m / s_r) - 1 later
    fastest-machine jobs, r being the chain's anchor machine."""
    m = instance.m
    tau = trace.schedule
    bad = []
    for chain in chains.chains:
        j = chain.end + 1
        lhs = psi(tau, m, j) + 1
        rhs = _floor(instance.speed(m) / instance.speed(chain.anchor))
        if tau[j] != m or lhs != rhs:
            bad.append((chain.start, j, lhs, rhs))
    return Check(not bad, bad or None)
