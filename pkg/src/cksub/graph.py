"""Simple undirected graphs and the connectivity primitives built on them.

Vertices are the integers ``0..n-1``.  Vertex sets are passed around as
``frozenset`` objects; partitions are tuples of such frozensets.
"""

from collections import deque
from typing import Iterable, Sequence


class Graph:
    """Immutable simple undirected graph.

    ``adj[v]`` is the ascending tuple of neighbours of ``v`` and ``nbr_mask[v]``
    the same set as a bitmask (used by the enumeration code).
    """

    __slots__ = ("n", "edges", "adj", "nbr_mask", "_edge_set")

    def __init__(self, n: int, edges: Iterable[Sequence[int]] = ()):
        if n < 0:
            raise ValueError("vertex count must be non-negative")
        seen = set()
        for e in edges:
            u, v = int(e[0]), int(e[1])
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u},{v}) out of range for n={n}")
            key = (u, v) if u < v else (v, u)
            if key in seen:
                raise ValueError(f"duplicate edge {key}")
            seen.add(key)
        self.n = n
        self.edges = tuple(sorted(seen))
        self._edge_set = frozenset(seen)
        nbrs = [[] for _ in range(n)]
        for u, v in self.edges:
            nbrs[u].append(v)
            nbrs[v].append(u)
        self.adj = tuple(tuple(sorted(a)) for a in nbrs)
        self.nbr_mask = tuple(sum(1 << w for w in a) for a in self.adj)

    @property
    def m(self) -> int:
        return len(self.edges)

    def has_edge(self, u: int, v: int) -> bool:
        return ((u, v) if u < v else (v, u)) in self._edge_set

    def neighbors(self, v: int):
        return self.adj[v]

    def vertices(self):
        return range(self.n)

    def subgraph(self, vertices):
        """Induced subgraph relabelled to ``0..len-1``; returns (graph, old ids)."""
        order = sorted(vertices)
        index = {v: i for i, v in enumerate(order)}
        edges = [(index[u], index[v]) for u, v in self.edges if u in index and v in index]
        return Graph(len(order), edges), order

    def is_tree(self) -> bool:
        return self.n >= 1 and self.m == self.n - 1 and len(components(self)) == 1

    def is_complete(self) -> bool:
        return self.m == self.n * (self.n - 1) // 2

    def __eq__(self, other):
        return isinstance(other, Graph) and self.n == other.n and self.edges == other.edges

    def __hash__(self):
        return hash((self.n, self.edges))

    def __repr__(self):
        return f"Graph(n={self.n}, edges={list(self.edges)})"


def path_graph(n: int) -> Graph:
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def star_graph(leaves: int) -> Graph:
    """Star with centre 0 and leaves 1..leaves."""
    return Graph(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def complete_graph(n: int) -> Graph:
    return Graph(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def components(g: Graph, removed: Iterable[int] = ()) -> list:
    """Connected components of ``g - removed``, ordered by smallest member."""
    blocked = set(removed)
    seen = [False] * g.n
    for v in blocked:
        seen[v] = True
    out = []
    for s in range(g.n):
        if seen[s]:
            continue
        seen[s] = True
        comp = [s]
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for w in g.adj[u]:
                if not seen[w]:
                    seen[w] = True
                    comp.append(w)
                    queue.append(w)
        out.append(frozenset(comp))
    return out


def component_of(g: Graph, v: int, removed: Iterable[int] = ()) -> frozenset:
    blocked = set(removed)
    if v in blocked:
        raise ValueError(f"vertex {v} is removed")
    seen = {v}
    queue = deque([v])
    while queue:
        u = queue.popleft()
        for w in g.adj[u]:
            if w not in seen and w not in blocked:
                seen.add(w)
                queue.append(w)
    return frozenset(seen)


def is_connected_subset(g: Graph, s: Iterable[int]) -> bool:
    """True iff G[s] is connected; the empty set counts as connected."""
    s = set(s)
    if not s:
        return True
    start = next(iter(s))
    seen = {start}
    queue = deque([start])
    while queue:
        u = queue.popleft()
        for w in g.adj[u]:
            if w in s and w not in seen:
                seen.add(w)
                queue.append(w)
    return len(seen) == len(s)


def separates(g: Graph, u: int, v: int, z: Iterable[int]) -> bool:
    """True iff ``z`` avoids u, v and puts them in different components of G - z."""
    z = set(z)
    if u in z or v in z:
        return False
    return v not in component_of(g, u, z)


def minimalize_separator(g: Graph, u: int, v: int, z: Iterable[int]) -> frozenset:
    """Shrink a u,v-separator to an inclusion-minimal one.

    Scans ``z`` in ascending order and drops every vertex whose removal keeps
    u and v separated.
    """
    if u == v:
        raise ValueError("u and v must be distinct")
    if g.has_edge(u, v):
        raise ValueError(f"{u} and {v} are adjacent; no separator exists")
    current = set(z)
    if not separates(g, u, v, current):
        raise ValueError(f"{sorted(current)} does not separate {u} from {v}")
    for w in sorted(current):
        trial = current - {w}
        if separates(g, u, v, trial):
            current = trial
    return frozenset(current)


def is_minimal_separator(g: Graph, u: int, v: int, z: Iterable[int]) -> bool:
    z = set(z)
    return separates(g, u, v, z) and all(not separates(g, u, v, z - {w}) for w in z)


def as_partition(g: Graph, blocks) -> tuple:
    """Validate a vertex partition and return it as a tuple of frozensets."""
    out = tuple(frozenset(b) for b in blocks)
    covered = set()
    for b in out:
        if not b:
            raise ValueError("partition blocks must be non-empty")
        if covered & b:
            raise ValueError("partition blocks overlap")
        covered |= b
    if covered != set(range(g.n)):
        raise ValueError("partition does not cover every vertex")
    return out


def block_index(partition) -> dict:
    return {v: i for i, b in enumerate(partition) for v in b}


def crossing_edges(g: Graph, partition) -> list:
    """Edges whose endpoints lie in different blocks of ``partition``."""
    where = block_index(as_partition(g, partition))
    return [(u, v) for u, v in g.edges if where[u] != where[v]]


def tree_path(g: Graph, u: int, v: int) -> list:
    """Vertices of the unique u,v-path in a tree (BFS parent pointers)."""
    parent = {u: None}
    queue = deque([u])
    while queue:
        a = queue.popleft()
        if a == v:
            break
        for w in g.adj[a]:
            if w not in parent:
                parent[w] = a
                queue.append(w)
    if v not in parent:
        raise ValueError(f"no path between {u} and {v}")
    path = [v]
    while path[-1] != u:
        path.append(parent[path[-1]])
    return path[::-1]


def mask_is_connected(nbr_mask, mask: int) -> bool:
    """Connectivity of the vertex set encoded by ``mask`` (empty set is connected)."""
    if mask == 0:
        return True
    low = mask & -mask
    reached = low
    frontier = low
    while frontier:
        b = frontier & -frontier
        frontier ^= b
        new = nbr_mask[b.bit_length() - 1] & mask & ~reached
        reached |= new
        frontier |= new
    return reached == mask


def mask_components(nbr_mask, mask: int) -> int:
    """Number of connected components of the vertex set encoded by ``mask``."""
    count = 0
    while mask:
        low = mask & -mask
        reached = low
        frontier = low
        while frontier:
            b = frontier & -frontier
            frontier ^= b
            new = nbr_mask[b.bit_length() - 1] & mask & ~reached
            reached |= new
            frontier |= new
        mask &= ~reached
        count += 1
    return count
