"""Full single-instance pipeline written to JSON, CSV and a PNG figure."""
from __future__ import annotations

import csv
import json
from fractions import Fraction
from pathlib import Path
from typing import Optional

from .dualfit import (
    applicable_fittings,
    check_subchain_endpoint,
    critical_jobs,
    make_fitting,
    sub_chains,
    verify_fitting,
)
from .equilibrium import (
    TieBreak,
    bound_formula,
    brute_force_nash,
    ibarra_kim,
    is_divisible_speeds,
    is_nash,
)
from .errors import SptPoaError
from .io import instance_to_json
from .lp import build_dual, build_primal, simplex_solve
from .model import Instance, Schedule, completion_times, psi, require_canonical, social_cost
from .optimal import DEFAULT_GUARD, block_star, check_consecutive_property, is_optimal, mft_schedule
from .search import RunReport


def _dec(x: Fraction) -> str:
    return f"{float(x):.12g}"


def run_report(instance: Instance, out_dir, opt: Optional[Schedule] = None,
               ne: Optional[Schedule] = None) -> RunReport:
    """Run every check on one instance and write report.json/.csv/.png to ``out_dir``.

    ``opt`` and ``ne`` override the roles fed to the LPs and the fittings;
    by default they are the MFT schedule and the worst equilibrium.  If a
    stage fails, whatever was computed so far is written with an ``error``
    entry before the exception propagates.
    """
    require_canonical(instance)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    summary = {"instance": instance_to_json(instance), "checks": {}, "notes": []}
    checks = summary["checks"]
    try:
        trace = mft_schedule(instance)
        mft = trace.schedule
        summary["mft"] = {"assignment": list(mft), "trace": trace.to_json()}
        checks["mft_optimal"] = is_optimal(instance, mft).ok
        checks["consecutive_jobs"] = check_consecutive_property(instance, mft).ok
        summary["block_star"] = sorted(block_star(instance, trace))
        cr = critical_jobs(instance, trace)
        chains = sub_chains(instance, trace, cr)
        checks["subchain_endpoints"] = check_subchain_endpoint(instance, trace, chains).ok
        summary["critical_jobs"] = {"per_machine": {str(i): j for i, j in cr.per_machine.items()},
                                    "cr_m": cr.cr_m, "absent": list(cr.absent)}
        summary["sub_chains"] = [
            {"start": c.start, "members": list(c.members), "anchor": c.anchor} for c in chains.chains
        ]

        opt_cost = social_cost(instance, mft)
        if instance.m**instance.n <= DEFAULT_GUARD:
            equilibria = brute_force_nash(instance)
            checks["ibarra_kim_matches_brute_force"] = (
                [s.assignment for s in ibarra_kim(instance, TieBreak.ALL)]
                == [s.assignment for s in equilibria]
            )
        else:
            equilibria = ibarra_kim(instance, TieBreak.ALL)
        eq_costs = [(s, social_cost(instance, s)) for s in equilibria]
        worst_ne, worst_cost = max(eq_costs, key=lambda sc: (sc[1], sc[0].assignment))
        bound = bound_formula(instance.m, is_divisible_speeds(instance))
        summary["optimal_cost"] = str(opt_cost)
        summary["equilibria"] = [{"assignment": list(s), "social_cost": str(c)} for s, c in eq_costs]
        summary["worst_equilibrium"] = {"assignment": list(worst_ne), "social_cost": str(worst_cost)}
        summary["bound"] = str(bound)
        if opt_cost > 0:
            poa = worst_cost / opt_cost
            summary["poa"] = str(poa)
            checks["poa_within_bound"] = poa <= bound
        else:
            summary["notes"].append("optimal cost is zero; price of anarchy undefined")

        role_opt = opt if opt is not None else mft
        role_ne = ne if ne is not None else worst_ne
        summary["roles"] = {"opt": list(role_opt), "ne": list(role_ne),
                            "overridden": opt is not None or ne is not None}
        if opt is not None and not is_optimal(instance, role_opt).ok:
            summary["notes"].append("role-opt schedule is not optimal for this instance")
        if ne is not None and not is_nash(instance, role_ne).ok:
            summary["notes"].append("role-ne schedule is not a Nash equilibrium for this instance")

        fittings, role_slacks = {}, {}
        for name in applicable_fittings(instance):
            fit = make_fitting(instance, trace, name)
            per_eq = [verify_fitting(instance, mft, s, fit) for s in equilibria]
            role = verify_fitting(instance, mft, role_ne, fit)
            role_slacks[name] = role.slacks
            fittings[name] = {
                **fit.to_json(),
                "feasible_for_all_equilibria": all(v.feasible for v in per_eq),
                "role_ne_feasible": role.feasible,
                "role_ne_slacks": [str(v) for v in role.slacks],
                "role_ne_tight": role.tight,
            }
            checks[f"fitting_{name}"] = all(v.feasible for v in per_eq)
        summary["fittings"] = fittings

        lp_results = {}
        for variant in ("sum", "weak"):
            primal = simplex_solve(build_primal(instance, role_opt, role_ne, variant))
            dual = simplex_solve(build_dual(instance, role_opt, role_ne, variant))
            lp_results[variant] = {"primal": primal.to_json(), "dual": dual.to_json()}
            if primal.status == dual.status == "optimal":
                checks[f"lp_{variant}_strong_duality"] = primal.value == dual.value
        summary["lp"] = lp_results
        sum_primal = lp_results["sum"]["primal"]
        if sum_primal["status"] == "optimal":
            v = Fraction(sum_primal["value"])
            checks["fittings_above_lp_optimum"] = all(
                Fraction(f["beta"]) >= v for f in fittings.values()
            )

        csv_path = out / "report.csv"
        _write_csv(csv_path, instance, mft, role_ne, fittings)
        from .plotting import render_report_figure

        label = "role-ne schedule" if ne is not None else "worst equilibrium"
        render_report_figure(out / "report.png", instance, mft, role_ne, role_slacks, label)
        summary["csv_path"] = str(csv_path)
        summary["figure_path"] = str(out / "report.png")
    except SptPoaError as exc:
        summary["error"] = f"{type(exc).__name__}: {exc}"
        _write_json(out / "report.json", summary)
        raise
    summary["ok"] = all(checks.values())
    _write_json(out / "report.json", summary)

    poa = Fraction(summary["poa"]) if "poa" in summary else Fraction(1)
    return RunReport(
        instances_evaluated=1,
        best_poa=poa,
        best_instance=instance,
        bound=bound,
        violations=[] if checks.get("poa_within_bound", True) else [summary["instance"]],
        csv_path=summary["csv_path"],
        summary=summary,
    )


def _write_json(path: Path, summary: dict):
    path.write_text(json.dumps(summary, indent=2))


def _write_csv(path: Path, instance: Instance, opt: Schedule, ne: Schedule, fittings: dict):
    c_opt = completion_times(instance, opt)
    c_ne = completion_times(instance, ne)
    header = ["job", "p", "p_decimal", "opt_machine", "ne_machine", "psi_opt", "psi_ne",
              "psi_ne_machine_in_opt", "C_opt", "C_ne"]
    for name in fittings:
        header += [f"z_{name}", f"z_{name}_decimal", f"slack_{name}", f"slack_{name}_decimal"]
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for k in range(1, instance.n + 1):
            row = [k, str(instance.p(k)), _dec(instance.p(k)), opt[k], ne[k],
                   psi(opt, opt[k], k), psi(ne, ne[k], k), psi(opt, ne[k], k),
                   str(c_opt[k - 1]), str(c_ne[k - 1])]
            for f in fittings.values():
                z = Fraction(f["z"][k - 1]) if k <= len(f["z"]) else Fraction(0)
                sl = Fraction(f["role_ne_slacks"][k - 1])
                row += [str(z), _dec(z), str(sl), _dec(sl)]
            w.writerow(row)
