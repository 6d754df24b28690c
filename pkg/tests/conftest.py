from fractions import Fraction

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from sptpoa import Instance, normalize
from sptpoa.model import as_schedule

settings.register_profile(
    "default", max_examples=150, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

F = Fraction

ptimes = st.fractions(min_value=0, max_value=8, max_denominator=4)
speeds = st.fractions(min_value=1, max_value=6, max_denominator=3)


@st.composite
def instances(draw, max_n=5, max_m=3, min_m=1, positive=False, speed_pool=None):
    m = draw(st.integers(min_m, max_m))
    n = draw(st.integers(1, max_n))
    pt = ptimes.filter(lambda v: v > 0) if positive else ptimes
    p = draw(st.lists(pt, min_size=n, max_size=n))
    sp = st.sampled_from(speed_pool) if speed_pool else speeds
    s = draw(st.lists(sp, min_size=m, max_size=m))
    return normalize(Instance(tuple(p), tuple(F(v) for v in s)))


@st.composite
def instance_and_schedules(draw, k=1, **kw):
    inst = draw(instances(**kw))
    scheds = [
        as_schedule(draw(st.lists(st.integers(1, inst.m), min_size=inst.n, max_size=inst.n)))
        for _ in range(k)
    ]
    return (inst, *scheds)


def inst(p, s):
    return Instance(tuple(F(v) for v in p), tuple(F(v) for v in s))


def sched(*a):
    return as_schedule(a)
