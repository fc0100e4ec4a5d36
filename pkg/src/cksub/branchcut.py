"""Branch-and-cut for the maximum-weight connected subgraph problem.

Variables ``x[v*k + c]`` say that vertex v is in class c.  The LP starts with
the cover rows; connectivity cuts are separated lazily on integral points and
heuristically on fractional ones, optionally together with indegree,
generalized connectivity and multiway cuts.
"""

import heapq
import logging
import math
import time
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .graph import Graph, components, is_connected_subset, minimalize_separator
from .inequalities import LinearInequality, make_connectivity, make_cover
from .separation import (
    separate_connectivity,
    separate_gencon_heuristic,
    separate_indegree_all,
    separate_multiway,
)
from .simplex import Basis, LpModel, remap_basis, solve

log = logging.getLogger("cksub")

CONFIGS = {
    "bc": ("connectivity",),
    "bc+i": ("connectivity", "indegree"),
    "bc+g": ("connectivity", "gencon"),
    "bc+m": ("connectivity", "gencon", "multiway"),
}
FAMILY_KEYS = {"connectivity": "conn", "indegree": "ind", "gencon": "gen", "multiway": "mw"}
INT_TOL = 1e-6
PURGE_AGE = 3        # LP solves a cut may stay slack before it becomes purgeable
PURGE_BATCH = 40     # purge only when this many rows are purgeable
HEAP_WARM_LIMIT = 64  # open nodes beyond this keep their basis but not its inverse


@dataclass(frozen=True)
class WeightedInstance:
    graph: Graph
    weights: tuple
    k: int
    name: str = ""

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be positive")
        if len(self.weights) != self.graph.n:
            raise ValueError("one weight per vertex required")
        object.__setattr__(self, "weights", tuple(int(w) for w in self.weights))


@dataclass
class SolverConfig:
    cuts: str = "bc"
    time_limit: float = 900.0
    tol: float = 1e-6
    node_limit: Optional[int] = None
    seed: int = 0
    heuristic_every: int = 8
    round_cap: int = 20          # cut rounds at the root
    node_round_cap: int = 20     # cut rounds at other nodes
    tail_rounds: int = 3         # non-root: branch after this many rounds of ...
    tail_tol: float = 0.01       # ... bound progress below this
    family_cap: int = 50

    def __post_init__(self):
        if self.cuts not in CONFIGS:
            raise ValueError(f"unknown cut configuration {self.cuts!r}")

    @property
    def families(self):
        return CONFIGS[self.cuts]


@dataclass
class SolveReport:
    status: str                  # "optimal" or "limit"
    classes: tuple
    objective: int
    bound: float
    gap: float
    nodes: int
    cuts: dict = field(default_factory=dict)
    seconds: float = 0.0
    root_bound: float = math.nan
    lp_iterations: int = 0
    hit_time_limit: bool = False   # True when the wall clock (not the node limit) stopped the run

    def text(self) -> str:
        cut_txt = " ".join(f"{k}={v}" for k, v in self.cuts.items())
        return (f"status {self.status}\nobjective {self.objective}\nbound {self.bound:g}\n"
                f"gap {self.gap:.4f}%  (gap = (bound - objective) / max(1, |objective|) * 100)\n"
                f"nodes {self.nodes}\ncuts {cut_txt}\nroot_bound {self.root_bound:.6f}\n"
                f"seconds {self.seconds:.3f}")


def gap_percent(objective, bound) -> float:
    return max(0.0, (bound - objective) / max(1, abs(objective)) * 100)


def lazy_integral_check(inst: WeightedInstance, x) -> Optional[list]:
    """Connectivity cuts for every class whose (integral) support is disconnected."""
    g, k = inst.graph, inst.k
    cuts = []
    for c in range(k):
        support = [v for v in range(g.n) if x[v][c] > 0.5]
        if is_connected_subset(g, support):
            continue
        outside = [v for v in range(g.n) if x[v][c] <= 0.5]
        comps = components(g, outside)
        first = comps[0]
        u = min(first)
        z = {w for a in first for w in g.adj[a]} - first
        for comp in comps[1:]:
            v = min(comp)
            cuts.append(make_connectivity(g, u, v, minimalize_separator(g, u, v, z), c))
    return cuts or None


def verify_subpartition(g: Graph, classes) -> bool:
    seen = set()
    for block in classes:
        if seen & block or not is_connected_subset(g, block):
            return False
        seen |= block
    return True


@dataclass(order=True)
class _Node:
    key: tuple
    lb: np.ndarray = field(compare=False)
    ub: np.ndarray = field(compare=False)
    warm: object = field(compare=False, default=None)
    bound: float = field(compare=False, default=math.inf)
    depth: int = field(compare=False, default=0)


class BranchAndCut:
    def __init__(self, inst: WeightedInstance, cfg: SolverConfig):
        self.inst, self.cfg = inst, cfg
        g, k = inst.graph, inst.k
        self.n, self.k = g.n, k
        obj = np.repeat(np.array(inst.weights, dtype=float), k)
        self.lp = LpModel(g.n * k, obj)
        self.seen = set()
        self.row_keys = []   # None for permanent rows
        self.row_age = []
        if k > 1:
            for v in range(g.n):
                self._add(make_cover(v, k))
        self.counts = {key: 0 for key in FAMILY_KEYS.values()}
        self.best_val = 0
        self.best_classes = tuple(frozenset() for _ in range(k))
        self.nodes = 0
        self.lp_iterations = 0
        self.root_bound = math.nan
        self.purged = 0
        self.heap = []

    # -- rows
    def _add(self, ineq: LinearInequality) -> bool:
        key = (ineq.coeffs, ineq.rhs)
        if key in self.seen:
            return False
        self.seen.add(key)
        k = self.k
        self.lp.add_row({v * k + c: float(a) for (v, c), a in ineq.coeffs}, float(ineq.rhs))
        self.row_keys.append(None if ineq.family == "cover" else key)
        self.row_age.append(0)
        return True

    def _age_rows(self, x):
        if not self.lp.m:
            return
        slack = np.array(self.lp.rhs) - self.lp.matrix() @ x
        for i, s in enumerate(slack):
            self.row_age[i] = self.row_age[i] + 1 if s > 1e-6 else 0

    def _purge(self, warm, heap):
        """Drop cuts that stayed slack; returns the remapped warm basis."""
        old = [i for i, key in enumerate(self.row_keys) if key is not None and self.row_age[i] >= PURGE_AGE]
        if len(old) < PURGE_BATCH:
            return warm
        gone = set(old)
        keep = [i for i in range(self.lp.m) if i not in gone]
        for i in old:
            self.seen.discard(self.row_keys[i])
        self.lp.remove_rows(keep)
        self.row_keys = [self.row_keys[i] for i in keep]
        self.row_age = [self.row_age[i] for i in keep]
        nvar = self.n * self.k
        cache = {}
        for node in heap:
            if node.warm is not None:
                ident = id(node.warm)
                if ident not in cache:
                    cache[ident] = remap_basis(node.warm, nvar, keep)
                node.warm = cache[ident]
        self.purged += len(old)
        return remap_basis(warm, nvar, keep)

    def _add_cuts(self, cuts, family_hint=None) -> int:
        added = 0
        for ineq in cuts:
            if self._add(ineq):
                added += 1
                fam = family_hint or ineq.family
                self.counts[FAMILY_KEYS.get(fam, "conn")] += 1
        return added

    # -- primal side
    def _try_incumbent(self, x):
        """Round an LP point: per class keep the heaviest component of {x > 1/2}."""
        g, w = self.inst.graph, self.inst.weights
        classes = []
        total = 0
        for c in range(self.k):
            support = [v for v in range(self.n) if x[v][c] > 0.5]
            outside = set(range(self.n)) - set(support)
            best, best_w = frozenset(), 0
            for comp in components(g, outside):
                cw = sum(w[v] for v in comp)
                if cw > best_w:
                    best, best_w = comp, cw
            classes.append(best)
            total += best_w
        if total > self.best_val and verify_subpartition(g, classes):
            self.best_val = total
            self.best_classes = tuple(classes)

    # -- separation
    def _separate(self, x, node_index) -> int:
        g, k, cfg = self.inst.graph, self.k, self.cfg
        fams = cfg.families
        tol = cfg.tol
        cap = cfg.family_cap
        added = 0
        out = separate_connectivity(g, k, x, tol)
        added += self._add_cuts([c for c, _ in out.cuts[:cap]], "connectivity")
        if "indegree" in fams:
            out = separate_indegree_all(g, k, x, tol)
            added += self._add_cuts([c for c, _ in out.cuts[:cap]], "indegree")
        heuristic_turn = node_index % cfg.heuristic_every == 0
        if heuristic_turn and "gencon" in fams:
            out = separate_gencon_heuristic(g, k, x, tol)
            added += self._add_cuts([c for c, _ in out.cuts[:cap]], "gencon")
        if heuristic_turn and "multiway" in fams:
            cut = separate_multiway(g, k, x, tol)
            if cut is not None:
                added += self._add_cuts([cut], "multiway")
        return added

    def _timed_out(self):
        return time.perf_counter() - self.t0 > self.cfg.time_limit

    # -- node processing
    def _process(self, node: _Node, node_index: int):
        """Cut loop at one node; returns (action, data, bound).

        The root loop never stops early on the incumbent, so its final bound
        reflects the full strength of the enabled cut families.
        """
        root = node_index == 0
        rounds = 0
        warm = node.warm
        cap = self.cfg.round_cap if root else self.cfg.node_round_cap
        history = []
        while True:
            sol = solve(self.lp, warm, node.lb, node.ub)
            self.lp_iterations += sol.iterations
            if sol.status == "infeasible":
                return "prune", None, -math.inf
            warm = sol.basis
            bound = sol.objective
            self._age_rows(sol.x)
            warm = self._purge(warm, self.heap)
            x = sol.x.reshape(self.n, self.k).tolist()
            self._try_incumbent(x)
            if not root and math.floor(bound + INT_TOL) <= self.best_val:
                return "prune", None, bound
            frac = np.abs(sol.x - np.round(sol.x))
            if frac.max() <= INT_TOL:
                cuts = lazy_integral_check(self.inst, x)
                if cuts is None:
                    self._try_incumbent(x)
                    return "prune", None, bound
                if self._add_cuts(cuts, "connectivity") == 0:
                    raise RuntimeError("lazy cut already present but still violated")
                continue
            history.append(bound)
            tail = self.cfg.tail_rounds
            tailing = (not root and len(history) > tail
                       and history[-tail - 1] - bound < self.cfg.tail_tol)
            if rounds >= cap or tailing or self._timed_out():
                return "branch", (sol, warm), bound
            if self._separate(x, node_index) == 0:
                return "branch", (sol, warm), bound
            rounds += 1

    def run(self) -> SolveReport:
        self.t0 = time.perf_counter()
        root = _Node((-math.inf, 0), self.lp.lb.copy(), self.lp.ub.copy())
        heap = self.heap = [root]
        seq = 1
        limited = timed = False
        while heap:
            if self.cfg.node_limit is not None and self.nodes >= self.cfg.node_limit:
                limited = True
                break
            if self._timed_out():
                limited = timed = True
                break
            node = heapq.heappop(heap)
            if node.bound < math.inf and math.floor(node.bound + INT_TOL) <= self.best_val:
                continue
            index = self.nodes
            self.nodes += 1
            action, data, bound = self._process(node, index)
            if index == 0:
                self.root_bound = bound
            if action == "prune" or math.floor(bound + INT_TOL) <= self.best_val:
                continue
            sol, warm = data
            frac = np.abs(sol.x - 0.5)
            frac[np.abs(sol.x - np.round(sol.x)) <= INT_TOL] = np.inf
            j = int(np.argmin(frac))
            for val in (1.0, 0.0):
                lb, ub = node.lb.copy(), node.ub.copy()
                lb[j] = ub[j] = val
                child = _Node((-bound, seq), lb, ub, warm, bound, node.depth + 1)
                seq += 1
                heapq.heappush(heap, child)
            if len(heap) > HEAP_WARM_LIMIT:
                for nd in heap[HEAP_WARM_LIMIT:]:
                    if nd.warm is not None and nd.warm.binv is not None:
                        nd.warm = Basis(nd.warm.basic, nd.warm.at_upper)
            log.debug("node %d bound %.4f incumbent %d open %d", index, bound, self.best_val, len(heap))
        if limited:
            trivial = sum(w for w in self.inst.weights if w > 0)
            open_bound = max((math.floor(nd.bound + INT_TOL) if nd.bound < math.inf else trivial
                              for nd in heap), default=self.best_val)
            bound = float(max(open_bound, self.best_val))
            status = "optimal" if bound <= self.best_val else "limit"
        else:
            bound, status = float(self.best_val), "optimal"
        if not verify_subpartition(self.inst.graph, self.best_classes):
            raise RuntimeError("incumbent failed verification")
        check = sum(self.inst.weights[v] for b in self.best_classes for v in b)
        if check != self.best_val:
            raise RuntimeError("incumbent objective mismatch")
        if math.isnan(self.root_bound):
            self.root_bound = bound
        gap = 0.0 if status == "optimal" else gap_percent(self.best_val, bound)
        return SolveReport(status, self.best_classes, self.best_val, bound, gap, self.nodes,
                           dict(self.counts), time.perf_counter() - self.t0, self.root_bound,
                           self.lp_iterations, timed)


def solve_mws(inst: WeightedInstance, cfg: SolverConfig = None) -> SolveReport:
    return BranchAndCut(inst, cfg or SolverConfig()).run()
