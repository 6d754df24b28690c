import json
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.optimize import linprog

from sptpoa import (
    Constraint,
    LinearProgram,
    build_dual,
    build_primal,
    check_point_feasible,
    mft_schedule,
    simplex_solve,
    transpose_dual,
)
from sptpoa.errors import ValidationError
from sptpoa.lp import dual_variables

from conftest import inst, instance_and_schedules, sched

PAIR = inst((1, 1), (1, 1))
PAIR_NE, PAIR_OPT = sched(2, 2), sched(1, 2)


def rows(lp):
    return [(list(c.coefficients), c.relation, c.rhs) for c in lp.constraints]


def test_two_job_primal_rows():
    lp = build_primal(PAIR, PAIR_OPT, PAIR_NE, "sum")
    assert lp.sense == "max" and lp.objective == (2, 1)
    # the stability row p1 <= p1 collapses to 0 <= 0
    assert rows(lp) == [([1, 1], "=", 1), ([0, 0], "<=", 0), ([1, -1], "<=", 0), ([-1, 0], "<=", 0)]


def test_two_job_weak_primal_rows():
    lp = build_primal(PAIR, PAIR_OPT, PAIR_NE, "weak")
    assert [c.name for c in lp.constraints] == ["norm", "dev_1", "dev_2", "spt_1", "sign_p1"]
    assert lp.row("dev_2").coefficients == (0, 0)
    assert lp.row("dev_1").coefficients == (0, 0)


def test_single_job_primal():
    lp = build_primal(inst((1,), (1,)), sched(1), sched(1))
    assert rows(lp) == [([1], "=", 1), ([0], "<=", 0), ([-1], "<=", 0)]
    assert simplex_solve(lp).value == 1


def test_two_job_dual_rows():
    lp = build_dual(PAIR, PAIR_OPT, PAIR_NE, "sum")
    assert lp.variables == ("beta", "y", "z_1") and lp.sense == "min"
    assert rows(lp) == [
        ([1, 0, 1], ">=", 2),
        ([1, 0, -1], ">=", 1),
        ([0, 0, 1], ">=", 0),
        ([0, 1, 0], ">=", 0),
    ]


def test_single_job_dual():
    i = inst((1,), (1, 3))
    lp = build_dual(i, sched(1), sched(2))
    assert lp.variables == ("beta", "y")
    # beta/1 + y/3 - y/1 >= 1/3
    assert rows(lp)[0] == ([1, F(1, 3) - 1, 0][:2], ">=", F(1, 3))


def test_two_job_solutions():
    primal = simplex_solve(build_primal(PAIR, PAIR_OPT, PAIR_NE, "sum"))
    assert primal.status == "optimal" and primal.value == F(3, 2)
    assert primal.primal_point == [F(1, 2), F(1, 2)]
    dual = simplex_solve(build_dual(PAIR, PAIR_OPT, PAIR_NE, "sum"))
    assert dual.value == F(3, 2)
    beta, _, z1 = dual.primal_point
    assert (beta, z1) == (F(3, 2), F(1, 2))


def test_two_job_point_checks():
    lp = build_dual(PAIR, PAIR_OPT, PAIR_NE, "sum")
    ok = check_point_feasible(lp, [2, 1, 0])
    assert ok.feasible and ok.slacks == [0, 1, 0, 1]
    bad = check_point_feasible(lp, [1, 1, 0])
    assert not bad.feasible and bad.slacks[0] == -1
    tight = check_point_feasible(lp, [F(3, 2), 1, F(1, 2)])
    assert tight.feasible and tight.slacks[:2] == [0, 0]


def test_box_lp():
    lp = LinearProgram("max", ("x",), (1,), (Constraint((1,), "<=", 1), Constraint((1,), ">=", 0)))
    assert simplex_solve(lp).value == 1


def test_point_dimension_checked():
    with pytest.raises(ValidationError):
        check_point_feasible(build_dual(PAIR, PAIR_OPT, PAIR_NE), [1, 2])


def test_bad_variant_and_shapes():
    with pytest.raises(ValidationError):
        build_primal(PAIR, PAIR_OPT, PAIR_NE, "strong")
    with pytest.raises(ValidationError):
        LinearProgram("max", ("x",), (1, 2), ())
    with pytest.raises(ValidationError):
        Constraint((1,), "<", 0)


def test_json_round_trip():
    lp = build_dual(PAIR, PAIR_OPT, PAIR_NE, "weak")
    again = LinearProgram.from_json(json.loads(json.dumps(lp.to_json())))
    assert again == lp
    assert "min beta" in lp.render()


# -- the hand-written dual against a mechanical transpose --------------------

@given(instance_and_schedules(k=2, max_n=5, max_m=3), st.sampled_from(["sum", "weak"]))
def test_dual_is_transpose_of_primal(case, variant):
    """With p known to be >= 0 the generic dual has one extra multiplier, for
    the -p_1 <= 0 row; dropping it and renaming rows to dual variables must
    reproduce the hand-written job rows exactly."""
    instance, opt, ne = case
    primal = build_primal(instance, opt, ne, variant)
    generic = transpose_dual(primal, nonneg=primal.variables)
    dual = build_dual(instance, opt, ne, variant)
    keep = [t for t, v in enumerate(generic.variables) if v != "sign_p1"]
    rename = {"norm": "beta", "dev": "y"}
    names = tuple(
        rename.get(generic.variables[t], generic.variables[t].replace("dev_", "y_").replace("spt_", "z_"))
        for t in keep
    )
    assert names == dual.variables == dual_variables(instance.n, variant)
    for k in range(instance.n):
        g, d = generic.constraints[k], dual.constraints[k]
        assert [g.coefficients[t] for t in keep] == list(d.coefficients)
        assert (g.relation, g.rhs) == (d.relation, d.rhs)


@given(instance_and_schedules(k=2, max_n=5, max_m=3), st.sampled_from(["sum", "weak"]))
def test_strong_duality_on_scheduling_lps(case, variant):
    instance, opt, ne = case
    primal = simplex_solve(build_primal(instance, opt, ne, variant))
    dual = simplex_solve(build_dual(instance, opt, ne, variant))
    # p >= 0 with the normalisation row keeps the primal bounded
    assert primal.status in ("optimal", "infeasible")
    if primal.status == "optimal":
        assert dual.status == "optimal" and primal.value == dual.value
    else:
        assert dual.status == "unbounded"


# -- simplex against scipy, plus exact certificates --------------------------

small = st.integers(-4, 4)


@st.composite
def random_lps(draw):
    nv = draw(st.integers(1, 4))
    nr = draw(st.integers(1, 5))
    cons = []
    for r in range(nr):
        a = draw(st.lists(small, min_size=nv, max_size=nv))
        cons.append(Constraint(tuple(a), draw(st.sampled_from(["<=", "=", ">="])), draw(small), f"r{r}"))
    # boxes keep most problems bounded without making all of them so
    for k in range(nv):
        if draw(st.booleans()):
            e = [0] * nv
            e[k] = 1
            cons.append(Constraint(tuple(e), "<=", draw(st.integers(0, 5)), f"ub{k}"))
            cons.append(Constraint(tuple(e), ">=", -draw(st.integers(0, 5)), f"lb{k}"))
    sense = draw(st.sampled_from(["max", "min"]))
    c = draw(st.lists(small, min_size=nv, max_size=nv))
    return LinearProgram(sense, tuple(f"x{k}" for k in range(nv)), tuple(c), tuple(cons))


def scipy_solve(lp):
    A_ub, b_ub, A_eq, b_eq = [], [], [], []
    for con in lp.constraints:
        a = [float(v) for v in con.coefficients]
        if con.relation == "<=":
            A_ub.append(a), b_ub.append(float(con.rhs))
        elif con.relation == ">=":
            A_ub.append([-v for v in a]), b_ub.append(-float(con.rhs))
        else:
            A_eq.append(a), b_eq.append(float(con.rhs))
    sign = -1 if lp.sense == "max" else 1
    res = linprog(
        sign * np.array([float(v) for v in lp.objective]),
        A_ub=A_ub or None, b_ub=b_ub or None, A_eq=A_eq or None, b_eq=b_eq or None,
        bounds=[(None, None)] * len(lp.variables), method="highs",
    )
    status = {0: "optimal", 2: "infeasible", 3: "unbounded"}[res.status]
    return status, (sign * res.fun if res.status == 0 else None)


def combo(lp, u):
    return [sum((u[r] * c.coefficients[k] for r, c in enumerate(lp.constraints)), F(0))
            for k in range(len(lp.variables))]


def assert_multiplier_signs(lp, u, flip):
    for ur, c in zip(u, lp.constraints):
        if c.relation == "<=":
            assert flip * ur >= 0
        elif c.relation == ">=":
            assert flip * ur <= 0


@given(random_lps())
def test_simplex_matches_scipy_and_certifies(lp):
    sol = simplex_solve(lp)
    status, value = scipy_solve(lp)
    assert sol.status == status
    if status == "optimal":
        assert float(sol.value) == pytest.approx(value, abs=1e-7)
        assert check_point_feasible(lp, sol.primal_point).feasible
        u = sol.dual_point
        assert combo(lp, u) == list(lp.objective)
        assert_multiplier_signs(lp, u, 1 if lp.sense == "max" else -1)
        assert sum(ur * c.rhs for ur, c in zip(u, lp.constraints)) == sol.value
    elif status == "infeasible":
        u = sol.certificate
        assert combo(lp, u) == [0] * len(lp.variables)
        assert_multiplier_signs(lp, u, 1)
        assert sum(ur * c.rhs for ur, c in zip(u, lp.constraints)) < 0
    else:
        d = sol.certificate
        assert check_point_feasible(lp, sol.primal_point).feasible
        gain = sum(c * v for c, v in zip(lp.objective, d))
        assert gain > 0 if lp.sense == "max" else gain < 0
        for con in lp.constraints:
            ad = sum(a * v for a, v in zip(con.coefficients, d))
            assert {"<=": ad <= 0, ">=": ad >= 0, "=": ad == 0}[con.relation]


def test_degenerate_cycling_example():
    # Beale's example cycles under the textbook rule; Bland's rule must finish
    lp = LinearProgram(
        "max",
        ("x1", "x2", "x3", "x4"),
        (F(3, 4), -150, F(1, 50), -6),
        (
            Constraint((F(1, 4), -60, F(-1, 25), 9), "<=", 0),
            Constraint((F(1, 2), -90, F(-1, 50), 3), "<=", 0),
            Constraint((0, 0, 1, 0), "<=", 1),
            *(Constraint(tuple(int(k == t) for k in range(4)), ">=", 0) for t in range(4)),
        ),
    )
    assert simplex_solve(lp).value == F(1, 20)


def test_redundant_equalities():
    lp = LinearProgram(
        "min", ("a", "b"), (1, 1),
        (Constraint((1, 1), "=", 2), Constraint((2, 2), "=", 4), Constraint((1, 0), ">=", 0),
         Constraint((0, 1), ">=", 0)),
    )
    sol = simplex_solve(lp)
    assert sol.value == 2 and combo(lp, sol.dual_point) == [1, 1]


def test_mft_roles_give_bounded_lp():
    i = inst((1, 2, 3), (1, 2))
    opt = mft_schedule(i).schedule
    for ne in (sched(2, 2, 1), sched(2, 2, 2)):
        v = simplex_solve(build_primal(i, opt, ne, "sum")).value
        assert 1 <= v <= F(3, 2)
