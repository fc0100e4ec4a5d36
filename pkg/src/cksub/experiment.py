"""Scaled-down experiment grid: ER instances, all four configurations.

Runs stop on a node limit so results (and the CSV, which then carries NA
in the seconds column) are reproducible; the wall-clock limit only acts as
a backstop and is flagged when it fires.
"""

from dataclasses import dataclass, field

from .branchcut import CONFIGS, SolverConfig, solve_mws
from .instances import GeneratorSpec, generate
from .report import csv_row

TREND_P = (0.05, 0.10, 0.20)
TREND_K = (2, 3, 5)


def trend_specs(n=30, per_p=10, base_seed=0) -> list:
    """``per_p`` instances per edge probability; k cycles through 2, 3, 5."""
    return [GeneratorSpec("er", n, p, TREND_K[i % len(TREND_K)], base_seed + i)
            for p in TREND_P for i in range(per_p)]


@dataclass
class GridResult:
    rows: list = field(default_factory=list)
    reports: dict = field(default_factory=dict)     # (name, config) -> SolveReport
    specs: list = field(default_factory=list)
    time_limit_hits: int = 0

    def optima_agree(self) -> list:
        """Instances where two solving configurations report different optima."""
        bad = []
        for spec in self.specs:
            vals = {self.reports[spec.name, c].objective for c in CONFIGS
                    if (spec.name, c) in self.reports and self.reports[spec.name, c].status == "optimal"}
            if len(vals) > 1:
                bad.append(spec.name)
        return bad

    def solved_by_some(self) -> int:
        return sum(any(self.reports[s.name, c].status == "optimal" for c in CONFIGS) for s in self.specs)

    def root_bound_share(self, config, base="bc", tol=1e-6) -> float:
        """Fraction of instances where ``config``'s root bound is <= the base config's."""
        hits = sum(self.reports[s.name, config].root_bound <= self.reports[s.name, base].root_bound + tol
                   for s in self.specs)
        return hits / max(1, len(self.specs))


def run_grid(specs, configs=CONFIGS, node_limit=100, time_limit=60.0, progress=None) -> GridResult:
    res = GridResult(specs=list(specs))
    for spec in res.specs:
        inst = generate(spec)
        for cfg_name in configs:
            rep = solve_mws(inst, SolverConfig(cuts=cfg_name, time_limit=time_limit, node_limit=node_limit))
            res.reports[spec.name, cfg_name] = rep
            res.time_limit_hits += rep.hit_time_limit
            res.rows.append(csv_row(inst, cfg_name, rep, seconds=False))
            if progress:
                progress(spec, cfg_name, rep)
    return res
