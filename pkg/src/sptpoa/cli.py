"""Command-line entry point: ``sptpoa <command> ...``.

Instances are read from a JSON file path or ``-`` for stdin and are
normalised on input, so job and machine numbers in every output (and in
any ``--role-*`` schedule you pass) refer to the sorted order.

Exit codes: 0 ok, 2 validation error, 3 size guard exceeded,
4 proven bound violated (an implementation bug).
"""
from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path

from .dualfit import FITTINGS, critical_jobs, make_fitting, sub_chains, verify_fitting
from .equilibrium import TieBreak, brute_force_nash, compute_poa, ibarra_kim
from .errors import BoundViolation, SptPoaError
from .io import dumps, instance_to_json, parse_instance, parse_schedule, schedule_to_json
from .lp import build_dual, build_primal, simplex_solve
from .model import social_cost
from .optimal import is_optimal, mft_schedule
from .report import run_report
from .search import SearchConfig, search_worst_case


def _read(path: str) -> bytes:
    if path == "-":
        return sys.stdin.buffer.read()
    return Path(path).read_bytes()


def _instance(args):
    return parse_instance(_read(args.instance))


def _schedule(path):
    return None if path is None else parse_schedule(_read(path))


def _emit(args, obj):
    text = dumps(obj)
    if getattr(args, "output", None):
        Path(args.output).write_text(text + "\n")
    else:
        print(text)


def cmd_opt(args):
    inst = _instance(args)
    trace = mft_schedule(inst)
    out = {
        "instance": instance_to_json(inst),
        "assignment": list(trace.schedule),
        "social_cost": str(social_cost(inst, trace.schedule)),
        "optimal": is_optimal(inst, trace.schedule).ok,
    }
    if args.trace:
        out["trace"] = trace.to_json()
    _emit(args, out)


def cmd_nash(args):
    inst = _instance(args)
    if args.all:
        found = brute_force_nash(inst)
    else:
        found = ibarra_kim(inst, TieBreak(args.policy))
    _emit(args, [schedule_to_json(s) for s in found])


def cmd_poa(args):
    inst = _instance(args)
    rep = compute_poa(inst, method=args.method)
    _emit(args, {"instance": instance_to_json(inst), **rep.to_json()})


def _roles(args, inst):
    opt = _schedule(args.role_opt)
    ne = _schedule(args.role_ne)
    if opt is None:
        opt = mft_schedule(inst).schedule
    if ne is None:
        ne = compute_poa(inst).worst_equilibrium
    return opt, ne


def cmd_lp(args):
    inst = _instance(args)
    opt, ne = _roles(args, inst)
    build = build_dual if args.dual else build_primal
    lp = build(inst, opt, ne, args.variant)
    out = {"roles": {"opt": list(opt), "ne": list(ne)}, "lp": lp.to_json()}
    if args.solve:
        out["solution"] = simplex_solve(lp).to_json()
    _emit(args, out)


def cmd_verify(args):
    inst = _instance(args)
    trace = mft_schedule(inst)
    fit = make_fitting(inst, trace, args.fitting)
    cr = critical_jobs(inst, trace)
    chains = sub_chains(inst, trace, cr)
    role_ne = _schedule(args.role_ne)
    targets = [role_ne] if role_ne is not None else brute_force_nash(inst)
    checks = []
    for ne in targets:
        v = verify_fitting(inst, trace.schedule, ne, fit)
        checks.append({
            "ne": list(ne),
            "feasible": v.feasible,
            "slacks": [str(s) for s in v.slacks],
            "tight": v.tight,
        })
    out = {
        "instance": instance_to_json(inst),
        "opt": list(trace.schedule),
        "fitting": fit.to_json(),
        "critical_jobs": {str(i): j for i, j in cr.per_machine.items()},
        "cr_m": cr.cr_m,
        "sub_chains": [{"start": c.start, "members": list(c.members), "anchor": c.anchor}
                       for c in chains.chains],
        "checks": checks,
        "verdict": all(c["feasible"] for c in checks),
    }
    _emit(args, out)
    return 0 if out["verdict"] else 1


def _pool(text):
    return tuple(Fraction(v) for v in text.split(","))


def cmd_search(args):
    cfg = SearchConfig(
        machines=args.machines,
        jobs=args.jobs,
        seed=args.seed,
        iterations=args.iters,
        speed_pool=_pool(args.speed_pool),
        ptime_grid=(args.max_num, args.max_den),
        perturb_steps=args.perturb_steps,
    )
    rep = search_worst_case(cfg, out_dir=args.out)
    _emit(args, rep.to_json())


def cmd_report(args):
    inst = _instance(args)
    rep = run_report(inst, args.out, opt=_schedule(args.role_opt), ne=_schedule(args.role_ne))
    _emit(args, rep.to_json())
    return 0 if rep.summary.get("ok") else 1


def build_parser():
    parser = argparse.ArgumentParser(prog="sptpoa", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def with_instance(name, help):
        p = sub.add_parser(name, help=help)
        p.add_argument("instance", help="instance JSON file, or - for stdin")
        p.add_argument("-o", "--output", help="write JSON here instead of stdout")
        return p

    p = with_instance("opt", "optimal schedule by MFT")
    p.add_argument("--trace", action="store_true", help="include the assignment order")
    p.set_defaults(func=cmd_opt)

    p = with_instance("nash", "pure Nash equilibria")
    p.add_argument("--policy", choices=[t.value for t in TieBreak], default="enumerate-all")
    p.add_argument("--all", action="store_true", help="exhaustive search instead of Ibarra-Kim")
    p.set_defaults(func=cmd_nash)

    p = with_instance("poa", "price of anarchy of one instance")
    p.add_argument("--method", choices=["auto", "brute-force", "ibarra-kim"], default="auto")
    p.set_defaults(func=cmd_poa)

    p = with_instance("lp", "build (and solve) the primal or dual LP")
    p.add_argument("--variant", choices=["weak", "sum"], default="sum")
    p.add_argument("--role-opt", help="schedule JSON used as the optimum (default: MFT)")
    p.add_argument("--role-ne", help="schedule JSON used as the equilibrium (default: worst NE)")
    p.add_argument("--dual", action="store_true")
    p.add_argument("--solve", action="store_true")
    p.set_defaults(func=cmd_lp)

    p = with_instance("verify", "check a dual fitting against every equilibrium")
    p.add_argument("--fitting", choices=FITTINGS, required=True)
    p.add_argument("--role-ne", help="check this schedule instead of all equilibria")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("search", help="hunt for instances with high price of anarchy")
    p.add_argument("--machines", type=int, required=True)
    p.add_argument("--jobs", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--iters", type=int, default=100)
    p.add_argument("--speed-pool", default="1,2", help="comma-separated rationals, e.g. 1,3/2,2")
    p.add_argument("--max-num", type=int, default=10, help="largest processing-time numerator")
    p.add_argument("--max-den", type=int, default=1, help="largest processing-time denominator")
    p.add_argument("--perturb-steps", type=int, default=None)
    p.add_argument("--out", help="directory for search.csv and search.png")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_search)

    p = with_instance("report", "full pipeline on one instance, written to a directory")
    p.add_argument("--out", required=True)
    p.add_argument("--role-opt")
    p.add_argument("--role-ne")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args) or 0
    except BoundViolation as exc:
        print(f"error: {exc}", file=sys.stderr)
        if exc.instance is not None:
            print(dumps(instance_to_json(exc.instance)), file=sys.stderr)
        return exc.exit_code
    except SptPoaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
