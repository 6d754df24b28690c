"""Seeded random instances and a restart-plus-perturbation hunt for high PoA."""
from __future__ import annotations

import csv
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Optional

import numpy as np

from .equilibrium import bound_formula, compute_poa, is_divisible_speeds
from .errors import BoundViolation, ValidationError
from .model import Instance, normalize, rational



@dataclass(frozen=True)
class SearchConfig:
    machines: int
    jobs: int
    seed: int = 0
    iterations: int = 100
    speed_pool: tuple = (Fraction(1), Fraction(2))
    ptime_grid: tuple = (10, 1)        # (max numerator, max denominator)
    perturb_steps: Optional[int] = None  # defaults to the number of jobs

    def __post_init__(self):
        if self.machines < 1 or self.jobs < 1:
            raise ValidationError("need at least one machine and one job")
        if self.iterations < 1:
            raise ValidationError("iterations must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise ValidationError("seed must be an unsigned 64-bit integer")
        pool = tuple(rational(v, "speed pool") for v in self.speed_pool)
        if not pool or any(v <= 0 for v in pool):
            raise ValidationError("speed pool must be non-empty and positive")
        object.__setattr__(self, "speed_pool", pool)
        num, den = self.ptime_grid
        if num < 1 or den < 1:
            raise ValidationError("processing-time grid bounds must be >= 1")

    @property
    def steps(self) -> int:
        return self.jobs if self.perturb_steps is None else self.perturb_steps


@dataclass
class RunReport:
    instances_evaluated: int
    best_poa: Fraction
    best_instance: Instance
    bound: Fraction
    violations: list = field(default_factory=list)
    csv_path: Optional[str] = None
    history: list = field(default_factory=list)
    summary: dict = field(default_factory=dict)

    def to_json(self):
        from .io import instance_to_json

        return {
            "instances_evaluated": self.instances_evaluated,
            "best_poa": str(self.best_poa),
            "best_poa_decimal": float(self.best_poa),
            "best_instance": instance_to_json(self.best_instance),
            "bound": str(self.bound),
            "violations": list(self.violations),
            "csv_path": self.csv_path,
            **({"summary": self.summary} if self.summary else {}),
        }


def _draw_ptime(rng, grid) -> Fraction:
    num, den = grid
    return Fraction(int(rng.integers(1, num + 1)), int(rng.integers(1, den + 1)))


def _draw(rng, config: SearchConfig) -> Instance:
    p = tuple(_draw_ptime(rng, config.ptime_grid) for _ in range(config.jobs))
    pool = config.speed_pool
    s = tuple(pool[int(rng.integers(len(pool)))] for _ in range(config.machines))
    return normalize(Instance(p, s))


def gen_random(config: SearchConfig) -> Instance:
    """One instance determined entirely by the config and its seed."""
    return _draw(np.random.default_rng(config.seed), config)


def _key(instance: Instance):
    return (instance.processing, instance.speeds)


def search_worst_case(config: SearchConfig, out_dir=None) -> RunReport:
    """Random restarts, each followed by single-job grid moves kept when PoA rises.

    Every evaluated instance is checked against its proven bound; a breach
    raises :class:`BoundViolation` carrying the instance.
    """
    rng = np.random.default_rng(config.seed)
    best_poa, best_inst = None, None
    history = []

    def evaluate(inst, kind):
        nonlocal best_poa, best_inst
        rep = compute_poa(inst)
        if not rep.bound_satisfied:
            raise BoundViolation(
                f"PoA {rep.poa} exceeds proven bound {rep.bound} on {inst}", instance=inst
            )
        history.append((len(history) + 1, kind, rep.poa, rep.bound, inst))
        if (
            best_poa is None
            or rep.poa > best_poa
            or (rep.poa == best_poa and _key(inst) < _key(best_inst))
        ):
            best_poa, best_inst = rep.poa, inst
        return rep.poa

    for _ in range(config.iterations):
        current = _draw(rng, config)
        current_poa = evaluate(current, "restart")
        for _ in range(config.steps):
            j = int(rng.integers(config.jobs))
            p = list(current.processing)
            p[j] = _draw_ptime(rng, config.ptime_grid)
            cand = normalize(Instance(tuple(p), current.speeds))
            poa = evaluate(cand, "perturb")
            if poa > current_poa:
                current, current_poa = cand, poa

    pool_div = is_divisible_speeds(Instance((Fraction(1),), tuple(sorted(config.speed_pool))))
    report = RunReport(
        instances_evaluated=len(history),
        best_poa=best_poa,
        best_instance=best_inst,
        bound=bound_formula(config.machines, pool_div),
        history=history,
    )
    if out_dir is not None:
        write_search_outputs(report, Path(out_dir))
    return report


def write_search_outputs(report: RunReport, out: Path) -> None:
    from .plotting import render_search_figure

    out.mkdir(parents=True, exist_ok=True)
    path = out / "search.csv"
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["evaluation", "kind", "poa", "poa_decimal", "bound", "jobs", "speeds"])
        for idx, kind, poa, bound, inst in report.history:
            w.writerow([
                idx, kind, str(poa), f"{float(poa):.12g}", str(bound),
                " ".join(map(str, inst.processing)), " ".join(map(str, inst.speeds)),
            ])
    report.csv_path = str(path)
    render_search_figure(out / "search.png", report)
