import itertools
from fractions import Fraction as F

import pytest
from hypothesis import given

from sptpoa import Instance, completion_time, completion_times, normalize, psi, social_cost
from sptpoa.errors import InvariantViolation, PreconditionError, ValidationError
from sptpoa.model import (
    check_schedule,
    rational,
    require_canonical,
    scaled_integers,
    social_cost_positional,
)

from conftest import inst, instance_and_schedules, sched


def simulate(instance, schedule):
    """Independent queue simulation: each machine runs its jobs in index order."""
    clock = {i: F(0) for i in range(1, instance.m + 1)}
    done = {}
    for j in range(1, instance.n + 1):
        i = schedule[j]
        clock[i] += instance.p(j) / instance.speed(i)
        done[j] = clock[i]
    return done


@pytest.mark.parametrize(
    "p, s, want_p, want_s",
    [
        ((3, 1, 2), (4, 2), (1, 2, 3), (1, 2)),
        ((1,), (1,), (1,), (1,)),
        ((1, 1), (3, 6, 3), (1, 1), (1, 1, 2)),
    ],
)
def test_normalize(p, s, want_p, want_s):
    out = normalize(inst(p, s))
    assert out.processing == tuple(F(v) for v in want_p)
    assert out.speeds == tuple(F(v) for v in want_s)
    assert out.is_canonical


def test_normalize_is_idempotent():
    once = normalize(inst((5, 2, 2), (3, 9)))
    assert normalize(once) == once


@pytest.mark.parametrize(
    "tau, machine, job, want",
    [((1, 2, 2), 2, 1, 2), ((1, 2, 2), 1, 1, 0), ((2, 2, 2), 2, 3, 0)],
)
def test_psi(tau, machine, job, want):
    assert psi(sched(*tau), machine, job) == want


def test_completion_time_examples():
    i = inst((1, 2, 3), (1, 2))
    assert completion_time(i, sched(1, 2, 2), 3) == F(5, 2)
    assert completion_time(i, sched(1, 2, 2), 1) == 1
    assert completion_time(inst((0, 5), (1, 1)), sched(1, 1), 2) == 5


def test_social_cost_examples():
    assert social_cost(inst((1, 2, 3), (1, 2)), sched(1, 2, 2)) == F(9, 2)
    # single machine: sum over k of (n - k + 1) p_k
    assert social_cost(inst((1, 2, 3), (1,)), sched(1, 1, 1)) == 3 * 1 + 2 * 2 + 1 * 3
    assert social_cost(inst((0, 0), (1, 1)), sched(1, 2)) == 0


@given(instance_and_schedules(max_n=6, max_m=3))
def test_completion_sum_equals_positional_form(case):
    instance, tau = case
    want = simulate(instance, tau)
    assert completion_times(instance, tau) == [want[j] for j in range(1, instance.n + 1)]
    assert social_cost_positional(instance, tau) == sum(want.values())
    assert social_cost(instance, tau) == sum(want.values())


def test_scaled_integers_reproduce_costs():
    i = normalize(inst((F(1, 3), F(5, 2), 4), (1, F(3, 2), 2)))
    P, W, K = scaled_integers(i)
    for tau in itertools.product(range(1, 4), repeat=3):
        s = sched(*tau)
        total = sum(P[k - 1] * W[s[k] - 1] * (psi(s, s[k], k) + 1) for k in range(1, 4))
        assert F(total, K) == social_cost(i, s)


@pytest.mark.parametrize(
    "p, s",
    [((), (1,)), ((1,), ()), ((-1,), (1,)), ((1,), (0,)), ((1,), (-2,))],
)
def test_instance_rejects_bad_input(p, s):
    with pytest.raises(ValidationError):
        inst(p, s)


def test_floats_are_rejected():
    with pytest.raises(ValidationError, match="floats not accepted"):
        Instance((1.5,), (F(1),))
    with pytest.raises(ValidationError, match="floats not accepted"):
        rational("1.5")
    assert rational("3/2") == F(3, 2)


def test_schedule_validation():
    i = inst((1, 2), (1, 1))
    with pytest.raises(ValidationError):
        check_schedule(i, sched(1))
    with pytest.raises(ValidationError):
        check_schedule(i, sched(1, 3))
    with pytest.raises(ValidationError):
        sched(0, 1)


def test_require_canonical():
    with pytest.raises(PreconditionError):
        require_canonical(inst((2, 1), (1,)))
    with pytest.raises(PreconditionError):
        require_canonical(inst((1,), (2,)))


def test_social_cost_detects_disagreement(monkeypatch):
    import sptpoa.model as model

    monkeypatch.setattr(model, "social_cost_positional", lambda *a: F(-1))
    with pytest.raises(InvariantViolation):
        model.social_cost(inst((1,), (1,)), sched(1))
