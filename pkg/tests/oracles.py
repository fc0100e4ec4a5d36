"""Brute-force references and seeded random fixtures shared by the tests."""

import itertools
import random
from fractions import Fraction as F

from cksub.graph import Graph, block_index, components, tree_path
from cksub.inequalities import block_indegrees


def orientations(edges):
    for flips in itertools.product((False, True), repeat=len(edges)):
        yield tuple((b, a) if f else (a, b) for (a, b), f in zip(edges, flips))


def dhat_cost(g, partition, arcs, col):
    return sum((d * col[v] for v, d in enumerate(block_indegrees(g, partition, arcs))), F(0))


def brute_alg1(g, partition, col):
    where = block_index(partition)
    cross = [(a, b) for a, b in g.edges if where[a] != where[b]]
    return min(dhat_cost(g, partition, arcs, col) for arcs in orientations(cross))


def brute_indegree_lhs(g, col):
    best = None
    for arcs in orientations(g.edges):
        d = [0] * g.n
        for _, b in arcs:
            d[b] += 1
        val = sum(((1 - d[v]) * col[v] for v in range(g.n)), F(0))
        best = val if best is None else max(best, val)
    return best


def brute_pairing_cost(g, active, delegates, x):
    """min over Z within V minus delegates separating every active pair of the best pivot cost."""
    special = {a for c in active for a in delegates[c]} | {a for pair in delegates.values() for a in pair}
    free = [v for v in range(g.n) if v not in special]
    paths = {c: set(tree_path(g, *delegates[c])) for c in active}
    best = None
    for r in range(len(free) + 1):
        for z in itertools.combinations(free, r):
            if any(not (paths[c] & set(z)) for c in active):
                continue
            cost = sum((min(x[v][c] for v in z if v in paths[c]) for c in active), F(0))
            best = cost if best is None else min(best, cost)
    return best


def random_graph(rng, n, p):
    return Graph(n, [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p])


def random_connected_graph(rng, n, p=0.4):
    """Random spanning tree plus G(n, p) extras: always connected."""
    edges = {(min(v, u), max(v, u)) for v in range(1, n) for u in [rng.randrange(v)]}
    edges |= {(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p}
    return Graph(n, sorted(edges))


def random_tree(rng, n):
    return Graph(n, [(rng.randrange(v), v) for v in range(1, n)])


def random_point(rng, n, k, den=8):
    return [[F(rng.randint(0, den), den) for _ in range(k)] for _ in range(n)]


def random_partition(rng, n, blocks):
    labels = [rng.randrange(blocks) for _ in range(n)]
    parts = {}
    for v, l in enumerate(labels):
        parts.setdefault(l, set()).add(v)
    return [frozenset(b) for b in parts.values()]


def num_components(g):
    return len(components(g))


def seeded(seed):
    return random.Random(seed)
