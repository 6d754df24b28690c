"""Instances, schedules and social cost on related machines.

Jobs and machines are 1-based in every public signature.  Within a machine
jobs run in the global SPT order, ties broken by ascending job index, so a
schedule is fully described by its assignment vector.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence

from .errors import InvariantViolation, PreconditionError, ValidationError

__all__ = [
    "Instance",
    "Schedule",
    "rational",
    "normalize",
    "psi",
    "completion_time",
    "completion_times",
    "social_cost",
    "social_cost_positional",
    "require_canonical",
    "check_schedule",
]


def rational(value, what="value") -> Fraction:
    """Coerce ``value`` to an exact Fraction.

    Accepts ints, Fractions and strings such as ``"7/2"`` or ``"3"``.
    Floats are refused outright: a float has already lost exactness.
    """
    if isinstance(value, bool):
        raise ValidationError(f"{what}: booleans are not rationals")
    if isinstance(value, float):
        raise ValidationError(
            f"{what}: floats not accepted ({value!r}); pass an integer or a 'num/den' string"
        )
    if isinstance(value, Rational):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if not text or any(ch in text for ch in ".eE"):
            raise ValidationError(
                f"{what}: {value!r} is not an exact rational; floats not accepted, use 'num/den'"
            )
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValidationError(f"{what}: cannot parse {value!r} as a rational") from exc
    raise ValidationError(f"{what}: unsupported type {type(value).__name__}")


@dataclass(frozen=True)
class Instance:
    processing: tuple[Fraction, ...]
    speeds: tuple[Fraction, ...]

    def __post_init__(self):
        p = tuple(rational(v, f"job {j}") for j, v in enumerate(self.processing, 1))
        s = tuple(rational(v, f"machine {i}") for i, v in enumerate(self.speeds, 1))
        if not p:
            raise ValidationError("instance needs at least one job")
        if not s:
            raise ValidationError("instance needs at least one machine")
        for j, v in enumerate(p, 1):
            if v < 0:
                raise ValidationError(f"job {j}: negative processing time {v}")
        for i, v in enumerate(s, 1):
            if v <= 0:
                raise ValidationError(f"machine {i}: non-positive speed {v}")
        object.__setattr__(self, "processing", p)
        object.__setattr__(self, "speeds", s)

    @property
    def n(self) -> int:
        return len(self.processing)

    @property
    def m(self) -> int:
        return len(self.speeds)

    @property
    def fastest(self) -> Fraction:
        return max(self.speeds)

    @property
    def is_canonical(self) -> bool:
        p, s = self.processing, self.speeds
        return (
            all(a <= b for a, b in zip(p, p[1:]))
            and all(a <= b for a, b in zip(s, s[1:]))
            and s[0] == 1
        )

    def speed(self, machine: int) -> Fraction:
        return self.speeds[machine - 1]

    def p(self, job: int) -> Fraction:
        return self.processing[job - 1]

    def __str__(self):
        fmt = lambda xs: "(" + ",".join(str(x) for x in xs) + ")"
        return f"p={fmt(self.processing)} s={fmt(self.speeds)}"


@dataclass(frozen=True)
class Schedule:
    assignment: tuple[int, ...]

    def __post_init__(self):
        a = tuple(self.assignment)
        for j, i in enumerate(a, 1):
            if isinstance(i, bool) or not isinstance(i, int):
                raise ValidationError(f"job {j}: machine index must be an integer, got {i!r}")
            if i < 1:
                raise ValidationError(f"job {j}: machine index {i} out of range")
        object.__setattr__(self, "assignment", a)

    def __len__(self):
        return len(self.assignment)

    def __iter__(self):
        return iter(self.assignment)

    def __getitem__(self, job: int) -> int:
        """Machine of ``job`` (1-based)."""
        return self.assignment[job - 1]

    def jobs_on(self, machine: int) -> list[int]:
        return [j for j, i in enumerate(self.assignment, 1) if i == machine]

    def __str__(self):
        return "(" + ",".join(map(str, self.assignment)) + ")"


def normalize(instance: Instance) -> Instance:
    """Sort jobs and speeds non-decreasingly and rescale so the slowest speed is 1.

    The job sort is stable, so equal processing times keep their input order.
    """
    p = sorted(instance.processing)
    s = sorted(instance.speeds)
    slowest = s[0]
    return Instance(tuple(p), tuple(v / slowest for v in s))


def require_canonical(instance: Instance) -> None:
    if not instance.is_canonical:
        raise PreconditionError(f"instance {instance} is not canonical; call normalize() first")


def check_schedule(instance: Instance, schedule: Schedule) -> None:
    if len(schedule) != instance.n:
        raise ValidationError(
            f"schedule has {len(schedule)} entries but the instance has {instance.n} jobs"
        )
    for j, i in enumerate(schedule, 1):
        if not 1 <= i <= instance.m:
            raise ValidationError(f"job {j}: machine {i} outside 1..{instance.m}")


def _check_job(n: int, job: int) -> None:
    if not 1 <= job <= n:
        raise ValidationError(f"job index {job} outside 1..{n}")


def psi(schedule: Schedule, machine: int, job: int) -> int:
    """Number of jobs after ``job`` in the global order that sit on ``machine``."""
    _check_job(len(schedule), job)
    if machine < 1:
        raise ValidationError(f"machine index {machine} out of range")
    return sum(1 for i in schedule.assignment[job:] if i == machine)


def completion_time(instance: Instance, schedule: Schedule, job: int) -> Fraction:
    check_schedule(instance, schedule)
    _check_job(instance.n, job)
    machine = schedule[job]
    work = sum(
        (instance.p(k) for k in range(1, job + 1) if schedule[k] == machine), Fraction(0)
    )
    return work / instance.speed(machine)


def completion_times(instance: Instance, schedule: Schedule) -> list[Fraction]:
    """All completion times, by a running per-machine prefix sum."""
    check_schedule(instance, schedule)
    load = [Fraction(0)] * instance.m
    out = []
    for p, i in zip(instance.processing, schedule):
        load[i - 1] += p
        out.append(load[i - 1] / instance.speeds[i - 1])
    return out


def social_cost_positional(instance: Instance, schedule: Schedule) -> Fraction:
    """Sum of p_j times the positional value (psi + 1) / s of the job's slot."""
    check_schedule(instance, schedule)
    after = [0] * instance.m
    total = Fraction(0)
    for j in range(instance.n, 0, -1):
        i = schedule[j]
        total += instance.p(j) * (after[i - 1] + 1) / instance.speed(i)
        after[i - 1] += 1
    return total


def social_cost(instance: Instance, schedule: Schedule) -> Fraction:
    """Sum of completion times, computed two ways that must agree exactly."""
    direct = sum(completion_times(instance, schedule), Fraction(0))
    positional = social_cost_positional(instance, schedule)
    if direct != positional:
        raise InvariantViolation(
            f"social cost mismatch on {instance} with {schedule}: {direct} != {positional}"
        )
    return direct


# -- integer scaling used by the brute-force enumerators -------------------

def scaled_integers(instance: Instance) -> tuple[list[int], list[int], int]:
    """Integers P, W and a scale K with p_j = P_j / D and 1/s_i = W_i / E, K = D * E.

    Any cost-like sum  sum p_k / s_i  equals  (sum P_k * W_i) / K, so comparisons
    between such sums can be done on plain ints.
    """
    d = math.lcm(*(v.denominator for v in instance.processing))
    inv = [1 / v for v in instance.speeds]
    e = math.lcm(*(v.denominator for v in inv))
    P = [int(v * d) for v in instance.processing]
    W = [int(v * e) for v in inv]
    return P, W, d * e


def assignments(n: int, m: int) -> Iterable[tuple[int, ...]]:
    """All of {1..m}^n in lexicographic order."""
    return itertools.product(range(1, m + 1), repeat=n)


def as_schedule(assignment: Sequence[int]) -> Schedule:
    return Schedule(tuple(assignment))
