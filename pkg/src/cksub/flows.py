"""Max-flow / min-cut, vertex cuts, bipartite vertex covers and min-cost flow.

All routines work over any ordered field (``Fraction`` for exact answers,
``float`` inside the solver).  ``eps`` is the residual threshold; keep it 0
for rationals.  A capacity of ``None`` means unbounded.
"""

import heapq
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction

from .graph import Graph, components

INF = None


@dataclass
class FlowNetwork:
    n: int
    arcs: list = field(default_factory=list)     # (tail, head, capacity or None, cost)
    demands: list = None                         # per node; negative = supply

    def add_arc(self, tail, head, cap=INF, cost=0):
        if cap is not None and cap < 0:
            raise ValueError("negative capacity")
        self.arcs.append((tail, head, cap, cost))
        return len(self.arcs) - 1


@dataclass
class FlowResult:
    flow: list
    value: object
    cost: object = 0
    cut: list = field(default_factory=list)      # arc indices crossing the min cut
    source_side: frozenset = frozenset()


class _Residual:
    """Residual graph with paired forward/backward edges."""

    def __init__(self, n):
        self.n = n
        self.head = []
        self.cap = []
        self.cost = []
        self.out = [[] for _ in range(n)]

    def add(self, a, b, cap, cost=0):
        self.out[a].append(len(self.head))
        self.head.append(b); self.cap.append(cap); self.cost.append(cost)
        self.out[b].append(len(self.head))
        self.head.append(a); self.cap.append(cap * 0); self.cost.append(-cost)


def _big(arcs, zero):
    total = zero
    for _, _, cap, _ in arcs:
        if cap is not None:
            total += cap
    return total + 1


def max_flow(net: FlowNetwork, s: int, t: int, eps=0) -> FlowResult:
    """Dinic's algorithm; returns the flow and the min cut next to ``s``."""
    if s == t:
        raise ValueError("source and sink coincide")
    zero = next((c for _, _, c, _ in net.arcs if c is not None), 0) * 0
    big = _big(net.arcs, zero)
    res = _Residual(net.n)
    for a, b, cap, _ in net.arcs:
        res.add(a, b, big if cap is None else cap)
    head, cap, out = res.head, res.cap, res.out
    value = zero
    while True:
        level = [-1] * net.n
        level[s] = 0
        q = deque([s])
        while q:
            a = q.popleft()
            for e in out[a]:
                if cap[e] > eps and level[head[e]] < 0:
                    level[head[e]] = level[a] + 1
                    q.append(head[e])
        if level[t] < 0:
            break
        it = [0] * net.n

        def push(a, limit):
            if a == t:
                return limit
            while it[a] < len(out[a]):
                e = out[a][it[a]]
                b = head[e]
                if cap[e] > eps and level[b] == level[a] + 1:
                    got = push(b, cap[e] if limit is None or cap[e] < limit else limit)
                    if got is not None and got > eps:
                        cap[e] -= got
                        cap[e ^ 1] += got
                        return got
                it[a] += 1
            return None

        while True:
            got = push(s, None)
            if got is None or not got > eps:
                break
            value += got
    side = {s}
    q = deque([s])
    while q:
        a = q.popleft()
        for e in out[a]:
            if cap[e] > eps and head[e] not in side:
                side.add(head[e])
                q.append(head[e])
    flow = []
    cut = []
    for i, (a, b, c, _) in enumerate(net.arcs):
        flow.append(cap[2 * i + 1])
        if a in side and b not in side:
            cut.append(i)
    return FlowResult(flow, value, 0, cut, frozenset(side))


def min_vertex_cut(g: Graph, u: int, v: int, weights, eps=0):
    """Minimum-weight u,v-separator via node splitting; returns (value, Z)."""
    if u == v:
        raise ValueError("u and v must be distinct")
    if g.has_edge(u, v):
        raise ValueError(f"{u} and {v} are adjacent; no vertex cut exists")
    zero = weights[u] * 0
    net = FlowNetwork(2 * g.n)
    inner = {}
    for w in range(g.n):
        if w in (u, v):
            net.add_arc(2 * w, 2 * w + 1, INF)
        else:
            if weights[w] < 0:
                raise ValueError("vertex weights must be non-negative")
            inner[net.add_arc(2 * w, 2 * w + 1, weights[w])] = w
    for a, b in g.edges:
        net.add_arc(2 * a + 1, 2 * b, INF)
        net.add_arc(2 * b + 1, 2 * a, INF)
    res = max_flow(net, 2 * u + 1, 2 * v, eps)
    z = frozenset(inner[i] for i in res.cut if i in inner)
    if len(z) != len(res.cut):
        raise RuntimeError("minimum cut crosses an unbounded arc")
    value = sum((weights[w] for w in z), zero)
    return value, z


def min_weight_separating_set(g: Graph, weights, eps=0):
    """Cheapest Z such that G - Z has at least two components.

    An optimal Z either misses the heaviest remaining vertex a (then it is an
    a,b-cut for some b) or contains it (then Z - a separates G - a).  Peeling
    vertices in descending weight lets the peeled weight prune the scan.
    """
    if g.n < 2:
        raise ValueError("need at least two vertices")
    if g.is_complete():
        raise ValueError("complete graphs have no separating set")
    zero = weights[0] * 0
    order = sorted(range(g.n), key=lambda v: (-weights[v], v))
    best = None
    peeled = []
    paid = zero
    for a in order:
        if best is not None and not paid < best[0] - eps:
            break
        rest = [v for v in range(g.n) if v not in set(peeled)]
        h, ids = g.subgraph(rest)
        if h.n < 2 or h.is_complete():
            break
        hw = [weights[v] for v in ids]
        if len(components(h)) > 1:
            cand = (paid, frozenset(peeled))
            if best is None or cand[0] < best[0] - eps:
                best = cand
            break
        ia = ids.index(a)
        for ib in range(h.n):
            if ib == ia or h.has_edge(ia, ib):
                continue
            val, z = min_vertex_cut(h, ia, ib, hw, eps)
            val = paid + val
            if best is None or val < best[0] - eps:
                best = (val, frozenset(ids[w] for w in z) | frozenset(peeled))
        peeled.append(a)
        paid = paid + weights[a]
    return best


def bipartite_min_vertex_cover(g: Graph, bipartition, weights, eps=0) -> frozenset:
    """Minimum-weight vertex cover of a bipartite graph from a min s-t cut.

    The result is pruned so that every cover vertex keeps a neighbour outside
    the cover (vertices failing that are redundant).
    """
    left, right = set(bipartition[0]), set(bipartition[1])
    if left & right:
        raise ValueError("bipartition sides overlap")
    for a, b in g.edges:
        if not ((a in left and b in right) or (a in right and b in left)):
            raise ValueError(f"edge ({a},{b}) does not cross the bipartition")
    edges = [(a, b) if a in left else (b, a) for a, b in g.edges]
    if not edges:
        return frozenset()
    s, t = g.n, g.n + 1
    net = FlowNetwork(g.n + 2)
    for a in sorted(left):
        net.add_arc(s, a, weights[a])
    for b in sorted(right):
        net.add_arc(b, t, weights[b])
    for a, b in edges:
        net.add_arc(a, b, INF)
    side = max_flow(net, s, t, eps).source_side
    cover = {a for a in left if a not in side} | {b for b in right if b in side}
    nbrs = {v: set() for v in left | right}
    for a, b in edges:
        nbrs[a].add(b)
        nbrs[b].add(a)
    for w in sorted(cover):
        if nbrs[w] <= cover:
            cover.discard(w)
    return frozenset(cover)


def cover_weight(cover, weights):
    return sum((weights[v] for v in cover), 0)


def min_cost_flow(net: FlowNetwork, eps=0) -> FlowResult:
    """Successive shortest paths with Dijkstra potentials.

    Demands are per node (negative = supply).  Capacities and demands must be
    integral so the returned flow is integral; costs must be non-negative.
    """
    demands = net.demands or [0] * net.n
    if sum(demands) != 0:
        raise ValueError("demands must sum to zero")
    zero_cost = next((c for _, _, _, c in net.arcs), 0) * 0
    supply = sum(-d for d in demands if d < 0)
    big = sum(c for _, _, c, _ in net.arcs if c is not None) + supply + 1
    S, T = net.n, net.n + 1
    res = _Residual(net.n + 2)
    for a, b, cap, cost in net.arcs:
        if cost < 0:
            raise ValueError("costs must be non-negative")
        res.add(a, b, big if cap is None else cap, cost)
    for v, d in enumerate(demands):
        if d < 0:
            res.add(S, v, -d, zero_cost)
        elif d > 0:
            res.add(v, T, d, zero_cost)
    head, cap, cost, out = res.head, res.cap, res.cost, res.out
    pot = [zero_cost] * res.n
    sent = 0
    while sent < supply:
        dist = [None] * res.n
        prev = [-1] * res.n
        dist[S] = zero_cost
        heap = [(zero_cost, 0, S)]
        tick = 1
        while heap:
            d, _, a = heapq.heappop(heap)
            if d > dist[a]:
                continue
            for e in out[a]:
                if cap[e] > 0:
                    b = head[e]
                    nd = d + cost[e] + pot[a] - pot[b]
                    if dist[b] is None or nd < dist[b] - eps:
                        dist[b] = nd
                        prev[b] = e
                        heapq.heappush(heap, (nd, tick, b))
                        tick += 1
        if dist[T] is None:
            raise ValueError("demands cannot be met")
        for v in range(res.n):
            if dist[v] is not None:
                pot[v] += dist[v]
        push = supply - sent
        b = T
        while b != S:
            e = prev[b]
            push = min(push, cap[e])
            b = head[e ^ 1]
        b = T
        while b != S:
            e = prev[b]
            cap[e] -= push
            cap[e ^ 1] += push
            b = head[e ^ 1]
        sent += push
    flow = [cap[2 * i + 1] for i in range(len(net.arcs))]
    total = sum((f * c for f, (_, _, _, c) in zip(flow, net.arcs)), zero_cost)
    return FlowResult(flow, sent, total)


def exact(values):
    """Convenience: map a sequence to Fractions."""
    return [Fraction(v) for v in values]
