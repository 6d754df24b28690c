from fractions import Fraction as F

import pytest
from hypothesis import given

from sptpoa import (
    TieBreak,
    bound_formula,
    brute_force_nash,
    compute_poa,
    ibarra_kim,
    is_divisible_speeds,
    is_nash,
)
from sptpoa.errors import DegenerateInstanceError, GuardExceededError
from sptpoa.model import assignments

from conftest import inst, instance_and_schedules, instances, sched


def test_ibarra_kim_examples():
    i = inst((1, 2, 3), (1, 2))
    assert ibarra_kim(i, TieBreak.ALL) == [sched(2, 2, 1), sched(2, 2, 2)]
    assert ibarra_kim(i, TieBreak.LOWEST) == [sched(2, 2, 1)]
    assert ibarra_kim(i, TieBreak.HIGHEST) == [sched(2, 2, 2)]
    assert ibarra_kim(inst((1,), (1, 1))) == [sched(1), sched(2)]


def test_ibarra_kim_guard():
    with pytest.raises(GuardExceededError):
        ibarra_kim(inst((1,) * 8, (1, 1)), guard=10)


def test_is_nash_examples():
    i = inst((1, 2, 3), (1, 2))
    assert is_nash(i, sched(2, 2, 2)).ok
    verdict = is_nash(i, sched(1, 2, 2))
    assert not verdict.ok
    assert (verdict.witness.job, verdict.witness.machine) == (1, 2)
    assert verdict.witness.alternative == F(1, 2) < verdict.witness.current == 1
    for tau in assignments(2, 2):
        assert is_nash(inst((0, 0), (1, 1)), sched(*tau)).ok


def test_brute_force_nash_examples():
    assert brute_force_nash(inst((1, 2, 3), (1, 2))) == [sched(2, 2, 1), sched(2, 2, 2)]
    assert brute_force_nash(inst((1,), (1, 2))) == [sched(2)]
    assert brute_force_nash(inst((1, 1), (1, 1))) == [sched(1, 2), sched(2, 1)]


def test_compute_poa_examples():
    rep = compute_poa(inst((1, 2, 3), (1, 2)))
    assert rep.optimal_cost == F(9, 2)
    assert rep.poa == F(10, 9)
    assert rep.bound == F(3, 2) and rep.bound_satisfied
    assert compute_poa(inst((1,), (1,))).poa == 1
    assert compute_poa(inst((1, 1, 1, 1), (1, 1))).poa == 1


def test_compute_poa_methods_agree():
    i = inst((1, 2, 2, 3, 5), (1, F(3, 2), 2))
    a = compute_poa(i, method="brute-force")
    b = compute_poa(i, method="ibarra-kim")
    assert a.poa == b.poa and a.method != b.method


def test_zero_cost_instance_is_degenerate():
    with pytest.raises(DegenerateInstanceError):
        compute_poa(inst((0, 0), (1, 1)))


def test_bound_formula():
    assert bound_formula(2) == F(3, 2)
    assert bound_formula(3) == F(19, 10)
    assert bound_formula(3, divisible=True) == F(11, 6)
    assert bound_formula(1) == 1


def test_divisible_speeds():
    assert is_divisible_speeds(inst((1,), (1, 2, 4)))
    assert not is_divisible_speeds(inst((1,), (1, 2, 3)))
    assert is_divisible_speeds(inst((1,), (1,)))


@given(instances(max_n=6, max_m=3))
def test_ibarra_kim_equals_brute_force(instance):
    assert ibarra_kim(instance, TieBreak.ALL) == brute_force_nash(instance)


@given(instance_and_schedules(max_n=5, max_m=3))
def test_is_nash_agrees_with_brute_force(case):
    instance, tau = case
    assert is_nash(instance, tau).ok == (tau in brute_force_nash(instance))


@given(instances(max_n=6, max_m=4, positive=True))
def test_poa_within_proven_bound(instance):
    rep = compute_poa(instance)
    assert 1 <= rep.poa <= rep.bound
