"""Separation routines for the connectivity-type inequality families.

Points are ``x[v][c]`` (rationals on the exact path, floats in the solver).
``tol`` is the minimum violation for a cut to be reported; use 0 with
rationals.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Optional

from .flows import (
    FlowNetwork,
    bipartite_min_vertex_cover,
    min_cost_flow,
    min_vertex_cut,
    min_weight_separating_set,
)
from .graph import Graph, as_partition, block_index, components, minimalize_separator, tree_path
from .inequalities import (
    GenConSpec,
    LinearInequality,
    MultiwaySpec,
    PairingSpec,
    make_connectivity,
    make_gencon,
    make_indegree,
    make_multiway,
    make_pairing,
)


@dataclass
class SeparationOutcome:
    cuts: list = field(default_factory=list)     # (inequality, violation)
    stats: dict = field(default_factory=dict)    # family -> count

    def add(self, ineq: LinearInequality, viol):
        self.cuts.append((ineq, viol))
        self.stats[ineq.family] = self.stats.get(ineq.family, 0) + 1

    def __len__(self):
        return len(self.cuts)


def _column(x, c, nonneg=True):
    col = [x[v][c] for v in range(len(x))]
    if nonneg:
        col = [a if a > 0 else a * 0 for a in col]
    return col


def _eps(x):
    """Flow residual threshold matching the arithmetic of the point."""
    return 0 if isinstance(x[0][0], (int, Fraction)) else 1e-12


# ------------------------------------------------- generalized connectivity


def nice_partition(g: Graph, partition) -> bool:
    """True iff every crossing edge has an endpoint in a singleton block."""
    where = block_index(partition)
    size = {i: len(b) for i, b in enumerate(partition)}
    return all(size[where[a]] == 1 or size[where[b]] == 1
               for a, b in g.edges if where[a] != where[b])


def _pair_cover(g, left, right, edges, weight, fast=True, eps=0):
    """Min-weight vertex cover of the bipartite crossing graph between two blocks."""
    if fast and (len(left) == 1 or len(right) == 1):
        single, other = (left, right) if len(left) == 1 else (right, left)
        (u,) = single
        nbrs = frozenset(b if a == u else a for a, b in edges)
        # weights are non-negative and no vertex of G_ij is isolated
        if weight[u] <= sum((weight[v] for v in nbrs), weight[u] * 0):
            return frozenset([u])
        return nbrs
    sub = Graph(g.n, edges)
    verts = {a for e in edges for a in e}
    return bipartite_min_vertex_cover(sub, (left & verts, right & verts), weight, eps)


def separate_gencon_fixed_partition(g: Graph, w, cls: int, x, fast=True):
    """Best orientation of the crossing edges of ``w`` for class ``cls``.

    Returns (arcs, S, inequality); the arcs minimise sum d-hat(v) x[v][cls]
    over all orientations of the crossing edges.
    """
    w = as_partition(g, w)
    where = block_index(w)
    weight = _column(x, cls)
    eps = _eps(x)
    by_pair = {}
    for a, b in g.edges:
        i, j = where[a], where[b]
        if i != j:
            key = (i, j) if i < j else (j, i)
            by_pair.setdefault(key, []).append((a, b))
    arcs = []
    for (i, j) in sorted(by_pair):
        edges = by_pair[(i, j)]
        cover = _pair_cover(g, w[i], w[j], edges, weight, fast, eps)
        for a, b in edges:
            # head goes into the cover; when both ends are covered prefer block j
            ha = a in cover
            hb = b in cover
            if ha and hb:
                head = a if where[a] == j else b
            elif ha:
                head = a
            elif hb:
                head = b
            else:
                raise RuntimeError("vertex cover misses a crossing edge")
            tail = b if head == a else a
            arcs.append((tail, head))
    s = frozenset(max(sorted(block), key=lambda v: weight[v]) for block in w)
    # max() keeps the first maximal element, i.e. the smallest id on ties
    ineq = make_gencon(g, GenConSpec(s, w, tuple(arcs), cls))
    return tuple(arcs), s, ineq


def merge_heuristic_partition(g: Graph, cls: int, x) -> tuple:
    """Greedy merging of singleton blocks that raises the gencon left-hand side.

    ``delta(u,v)`` sums x over common neighbours no larger than both ends;
    adjacent pairs subtract the smaller endpoint.  Pairs are merged best
    first (ties lexicographic) while both are still singletons.
    """
    col = _column(x, cls, nonneg=False)
    cands = []
    nbr = [set(a) for a in g.adj]
    seen = set()
    for z in range(g.n):
        for u, v in combinations(g.adj[z], 2):
            if (u, v) in seen:
                continue
            seen.add((u, v))
            lo = min(col[u], col[v])
            delta = sum((col[t] for t in sorted(nbr[u] & nbr[v]) if col[t] <= lo), col[u] * 0)
            if v in nbr[u]:
                delta -= lo
            if delta > 0:
                cands.append((delta, u, v))
    cands.sort(key=lambda t: (-t[0], t[1], t[2]))
    block_of = list(range(g.n))
    blocks = {v: {v} for v in range(g.n)}
    for _, u, v in cands:
        if len(blocks[block_of[u]]) == 1 and len(blocks[block_of[v]]) == 1:
            blocks[u] |= blocks.pop(v)
            block_of[v] = u
    return tuple(sorted((frozenset(b) for b in blocks.values()), key=min))


def merge_heuristic_support(g: Graph, cls: int, x, partition) -> frozenset:
    """The S kept by the merge heuristic: the larger endpoint of each merge (higher id leaves on ties)."""
    col = _column(x, cls, nonneg=False)
    s = set()
    for b in partition:
        if len(b) == 1:
            s |= b
        else:
            u, v = sorted(b)
            s.add(u if col[u] >= col[v] else v)
    return frozenset(s)


def separate_gencon_heuristic(g: Graph, k: int, x, tol=0, classes=None) -> SeparationOutcome:
    out = SeparationOutcome()
    for c in (range(k) if classes is None else classes):
        part = merge_heuristic_partition(g, c, x)
        _, _, ineq = separate_gencon_fixed_partition(g, part, c, x)
        viol = ineq.violation(x)
        if viol > tol:
            out.add(ineq, viol)
    return out


# ------------------------------------------------------------- indegree


def indegree_orientation(g: Graph, cls: int, x) -> tuple:
    """Orient every edge toward its smaller-value endpoint (ties: lower id is the head)."""
    col = _column(x, cls, nonneg=False)
    arcs = []
    for a, b in g.edges:       # a < b
        if col[a] < col[b] or col[a] == col[b]:
            arcs.append((b, a))
        else:
            arcs.append((a, b))
    return tuple(arcs)


def separate_indegree(g: Graph, cls: int, x, tol=0) -> Optional[LinearInequality]:
    ineq = make_indegree(g, indegree_orientation(g, cls, x), cls)
    return ineq if ineq.violation(x) > tol else None


def separate_indegree_all(g: Graph, k: int, x, tol=0) -> SeparationOutcome:
    out = SeparationOutcome()
    for c in range(k):
        ineq = separate_indegree(g, c, x, tol)
        if ineq is not None:
            out.add(ineq, ineq.violation(x))
    return out


# --------------------------------------------------------- connectivity


def separate_connectivity(g: Graph, k: int, x, tol=0, exhaustive=False, limit=None) -> SeparationOutcome:
    """Split-network min-cut separation of the connectivity inequalities.

    Per class, non-adjacent pairs with x_u + x_v > 1 are tried in decreasing
    order of that sum; the scan moves on after the first violated pair unless
    ``exhaustive``.
    """
    out = SeparationOutcome()
    eps = _eps(x)
    for c in range(k):
        col = _column(x, c)
        pairs = []
        for u in range(g.n):
            for v in range(u + 1, g.n):
                sm = col[u] + col[v]
                if sm > 1 + tol and not g.has_edge(u, v):
                    pairs.append((-sm, u, v))
        pairs.sort()
        found = 0
        for negsum, u, v in pairs:
            val, z = min_vertex_cut(g, u, v, col, eps)
            if val < -negsum - 1 - tol:
                z = minimalize_separator(g, u, v, z)
                ineq = make_connectivity(g, u, v, z, c)
                viol = ineq.violation(x)
                if viol > tol:
                    out.add(ineq, viol)
                    found += 1
                    if not exhaustive or (limit is not None and found >= limit):
                        break
    return out


# ------------------------------------------------------------- multiway


def _multiway_on(g: Graph, k: int, x, cset, tol):
    weight = [sum((x[v][c] for c in cset), x[v][cset[0]] * 0) for v in range(g.n)]
    weight = [a if a > 0 else a * 0 for a in weight]
    if g.n < 3 or g.is_complete():
        return None
    _, z = min_weight_separating_set(g, weight, _eps(x))
    s = frozenset(max(sorted(K), key=lambda v: weight[v]) for K in components(g, z))
    ineq = make_multiway(g, MultiwaySpec(tuple(cset), s, z), k)
    viol = ineq.violation(x)
    return (ineq, viol) if viol > tol else None


def separate_multiway(g: Graph, k: int, x, tol=0, all_subsets=False) -> Optional[LinearInequality]:
    """Min-weight separating set heuristic with C = all classes.

    On a disconnected graph it also tries each component on its own and
    returns the most violated candidate.
    """
    csets = [tuple(range(k))]
    if all_subsets:
        if k > 3:
            raise ValueError("exhaustive class subsets only for k <= 3")
        csets = [cs for r in range(1, k + 1) for cs in combinations(range(k), r)]
    best = None
    comps = components(g)
    for cs in csets:
        cands = [_multiway_on(g, k, x, cs, tol)]
        if len(comps) > 1:
            for comp in comps:
                sub, ids = g.subgraph(comp)
                got = _multiway_on(sub, len(x[0]), [x[v] for v in ids], cs, tol)
                if got is not None:
                    ineq = _relabel(got[0], ids)
                    cands.append((ineq, ineq.violation(x)))
        for cand in cands:
            if cand is not None and (best is None or cand[1] > best[1]):
                best = cand
    return None if best is None else best[0]


def _relabel(ineq: LinearInequality, ids) -> LinearInequality:
    return LinearInequality.build((((ids[v], c), a) for (v, c), a in ineq.coeffs), ineq.rhs, ineq.family)


# ------------------------------------------------------- tree pairing


def pairing_paths(g: Graph, delegates) -> dict:
    return {c: tree_path(g, u, v) for c, (u, v) in delegates.items()}


def active_pairing_classes(g: Graph, cset, delegates) -> list:
    """Drop every class whose delegate path contains another active path."""
    paths = {c: frozenset(p) for c, p in pairing_paths(g, delegates).items()}
    active = list(cset)
    changed = True
    while changed:
        changed = False
        for b in active:
            for c in active:
                if b == c or not paths[c] <= paths[b]:
                    continue
                if paths[c] == paths[b] and active.index(b) < active.index(c):
                    continue  # equal paths: the later class goes
                active.remove(b)
                changed = True
                break
            if changed:
                break
    return active


def separate_pairing_tree(g: Graph, cset, delegates, x):
    """Exact separation of the pairing inequalities on a tree (min-cost flow).

    Returns (PairingSpec, inequality).  The inequality covers the full class
    set; dropped classes keep their delegate terms with an all-zero gamma row.
    """
    if not g.is_tree():
        raise ValueError("pairing separation needs a tree")
    cset = tuple(cset)
    delegates = {c: tuple(delegates[c]) for c in cset}
    for c, (u, v) in delegates.items():
        if u == v or g.has_edge(u, v):
            raise ValueError(f"delegates of class {c} must be distinct and non-adjacent")
    paths = pairing_paths(g, delegates)
    special = {a for pair in delegates.values() for a in pair}
    active = active_pairing_classes(g, cset, delegates)
    interior = {}
    for c in active:
        inner = [v for v in paths[c][1:-1] if v not in special]
        if not inner:
            raise ValueError(f"path of class {c} has no vertex outside the delegates")
        interior[c] = inner
    verts = sorted({v for c in active for v in interior[c]})
    vid = {v: i for i, v in enumerate(verts)}
    cid = {c: len(verts) + i for i, c in enumerate(active)}
    s, t = len(verts) + len(active), len(verts) + len(active) + 1
    m = len(active)
    net = FlowNetwork(t + 1, demands=[0] * (t + 1))
    net.demands[s], net.demands[t] = -m, m
    zero = x[0][0] * 0
    for v in verts:
        net.add_arc(s, vid[v], m, zero)
    mid = {}
    for c in active:
        for v in interior[c]:
            cost = x[v][c] if x[v][c] > 0 else zero
            mid[net.add_arc(vid[v], cid[c], 1, cost)] = (v, c)
        net.add_arc(cid[c], t, 1, zero)
    res = min_cost_flow(net, _eps(x))
    gamma = {}
    zset = set()
    for i, (v, c) in mid.items():
        if res.flow[i] >= 1:
            zset.add(v)
            gamma[(v, c)] = 1
    for v in zset:
        for c in cset:
            gamma.setdefault((v, c), 0)
    spec = PairingSpec(cset, delegates, frozenset(zset), gamma)
    return spec, make_pairing(g, spec)


def pairing_cost(spec: PairingSpec, x):
    return sum((x[v][c] for (v, c), gam in spec.gamma.items() if gam), x[0][0] * 0)
