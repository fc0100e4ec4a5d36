"""Brute-force ground truth for small graphs.

Enumerates connected k-subpartitions, checks inequality validity, certifies
facets by exact affine rank and computes exhaustive separation optima.  Every
routine refuses (with ``GuardExceeded``) instead of truncating silently.
"""

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import lcm
from typing import Optional

import numpy as np

from .graph import Graph, components, mask_is_connected
from .inequalities import (
    GenConSpec,
    LinearInequality,
    MultiwaySpec,
    check_multiway_spec,
    make_connectivity,
    make_cover,
    make_gencon,
    make_indegree,
    make_multiway,
)

MAX_VERTICES = 14
MAX_SUBPARTITIONS = 10**7
PRIME = 2**31 - 1


class GuardExceeded(RuntimeError):
    """Requested enumeration is above the configured cap."""


@dataclass(frozen=True)
class Subpartition:
    classes: tuple  # k frozensets

    @classmethod
    def from_masks(cls, masks):
        out = []
        for m in masks:
            m = int(m)
            out.append(frozenset(v for v in range(m.bit_length()) if m >> v & 1))
        return cls(tuple(out))

    @property
    def k(self):
        return len(self.classes)

    def incidence(self, n: int) -> list:
        k = self.k
        vec = [0] * (n * k)
        for c, block in enumerate(self.classes):
            for v in block:
                vec[v * k + c] = 1
        return vec

    def as_point(self, n: int) -> list:
        x = [[Fraction(0)] * self.k for _ in range(n)]
        for c, block in enumerate(self.classes):
            for v in block:
                x[v][c] = Fraction(1)
        return x

    def __str__(self):
        parts = ("{" + ",".join(str(v + 1) for v in sorted(b)) + "}" for b in self.classes)
        return "[" + ",".join(parts) + "]"


@dataclass
class ValidityResult:
    valid: bool
    max_lhs: Fraction
    rhs: Fraction
    counterexample: Optional[Subpartition] = None

    @property
    def violation(self) -> Fraction:
        return max(Fraction(0), self.max_lhs - self.rhs)

    def line(self) -> str:
        if self.valid:
            return "VALID"
        return f"VIOLATED {_fmt(self.violation)} by {self.counterexample}"


@dataclass
class FacetReport:
    tight_point_count: int
    affine_rank: int
    nk: int
    is_facet: bool
    valid: bool = True
    certificate: list = field(default_factory=list)

    def line(self) -> str:
        tag = "FACET" if self.is_facet else ("NOT-FACET" if self.valid else "INVALID")
        return f"{tag} rank={self.affine_rank}/{self.nk}"


def _fmt(q: Fraction) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


# ------------------------------------------------------------ enumeration


def _check_size(g: Graph, cap: int = MAX_VERTICES):
    if g.n > cap:
        raise GuardExceeded(f"enumeration capped at n <= {cap} (got n={g.n})")


@lru_cache(maxsize=256)
def connected_masks(g: Graph, cap: int = MAX_VERTICES) -> np.ndarray:
    """Bitmasks of all connected vertex sets (including the empty set), ascending."""
    _check_size(g, cap)
    nb = g.nbr_mask
    masks = [m for m in range(1 << g.n) if mask_is_connected(nb, m)]
    arr = np.array(masks, dtype=np.int64)
    arr.setflags(write=False)
    return arr


def enumerate_connected_subsets(g: Graph, cap: int = MAX_VERTICES) -> list:
    return [frozenset(v for v in range(g.n) if m >> v & 1) for m in connected_masks(g, cap)]


@lru_cache(maxsize=64)
def subpartition_masks(g: Graph, k: int, guard: int = MAX_SUBPARTITIONS) -> np.ndarray:
    """All ordered k-tuples of disjoint connected sets, as an (N, k) mask array."""
    if k < 1:
        raise ValueError("k must be positive")
    conn = connected_masks(g)
    rows = np.zeros((1, 0), dtype=np.int64)
    used = np.zeros(1, dtype=np.int64)
    for _ in range(k):
        order = np.argsort(used, kind="stable")
        rows, used = rows[order], used[order]
        keys, starts, counts = np.unique(used, return_index=True, return_counts=True)
        compat = [conn[(conn & int(u)) == 0] for u in keys]
        total = int(sum(len(cm) * int(cnt) for cm, cnt in zip(compat, counts)))
        if total > guard:
            raise GuardExceeded(
                f"more than {guard} subpartitions for n={g.n}, k={k}; enumeration refused"
            )
        new_rows, new_used = [], []
        for cm, st, cnt in zip(compat, starts, counts):
            block = rows[st:st + cnt]
            rep = np.repeat(block, len(cm), axis=0)
            extra = np.tile(cm, cnt)
            new_rows.append(np.column_stack([rep, extra]))
            new_used.append(np.repeat(used[st:st + cnt], len(cm)) | extra)
        rows = np.concatenate(new_rows)
        used = np.concatenate(new_used)
    # canonical order: lexicographic on the class masks
    order = np.lexsort(rows.T[::-1])
    rows = np.ascontiguousarray(rows[order])
    rows.setflags(write=False)
    return rows


def enumerate_subpartitions(g: Graph, k: int, guard: int = MAX_SUBPARTITIONS):
    for row in subpartition_masks(g, k, guard):
        yield Subpartition.from_masks(row)


def count_subpartitions(g: Graph, k: int, guard: int = MAX_SUBPARTITIONS) -> int:
    return len(subpartition_masks(g, k, guard))


def incidence_matrix(masks: np.ndarray, n: int) -> np.ndarray:
    """(N, n*k) 0/1 matrix with column v*k+c."""
    N, k = masks.shape
    bits = (masks[:, None, :] >> np.arange(n, dtype=np.int64)[None, :, None]) & 1
    return bits.reshape(N, n * k).astype(np.int8)


# ---------------------------------------------------------------- validity


def _scaled(values) -> tuple:
    """Integer vector and common denominator for a list of rationals."""
    values = [Fraction(a) for a in values]
    den = lcm(*(a.denominator for a in values)) if values else 1
    return [int(a * den) for a in values], den


def _class_tables(g: Graph, k: int, ineq: LinearInequality):
    """Per-class lookup of the scaled LHS contribution of every vertex mask."""
    ineq.check_dims(g.n, k)
    ints, den = _scaled([a for _, a in ineq.coeffs] + [ineq.rhs])
    coef = np.zeros((g.n, k), dtype=np.int64)
    for ((v, c), _), a in zip(ineq.coeffs, ints):
        coef[v, c] = a
    return coef, ints[-1], den


def lhs_values(g: Graph, k: int, ineq: LinearInequality, masks=None):
    """Scaled integer LHS for every subpartition; returns (values, rhs, den, masks)."""
    if masks is None:
        masks = subpartition_masks(g, k)
    coef, rhs, den = _class_tables(g, k, ineq)
    bits = (masks[:, :, None] >> np.arange(g.n, dtype=np.int64)[None, None, :]) & 1
    vals = np.einsum("ncv,vc->n", bits, coef)
    return vals, rhs, den, masks


def check_validity(g: Graph, k: int, ineq: LinearInequality) -> ValidityResult:
    vals, rhs, den, masks = lhs_values(g, k, ineq)
    i = int(np.argmax(vals))
    best = Fraction(int(vals[i]), den)
    if vals[i] <= rhs:
        return ValidityResult(True, best, Fraction(rhs, den))
    return ValidityResult(False, best, Fraction(rhs, den), Subpartition.from_masks(masks[i]))


# ------------------------------------------------------------ exact rank


def _select_independent_mod_p(rows: np.ndarray, p: int = PRIME) -> list:
    """Indices of rows forming a basis of the row space modulo p (Gauss-Jordan)."""
    a = np.mod(rows.astype(np.int64), p)
    idx = np.arange(len(a))
    chosen = []
    r = 0
    for col in range(a.shape[1]):
        if r == len(a):
            break
        nz = np.nonzero(a[r:, col])[0]
        if len(nz) == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
            idx[[r, piv]] = idx[[piv, r]]
        inv = pow(int(a[r, col]), p - 2, p)
        a[r] = (a[r] * inv) % p
        factors = a[:, col].copy()
        factors[r] = 0
        nzr = np.nonzero(factors)[0]
        if len(nzr):
            a[nzr] = (a[nzr] - (factors[nzr, None] * a[r][None, :]) % p) % p
        chosen.append(int(idx[r]))
        r += 1
    return chosen


def _nullspace_int(rows: list, ncols: int) -> list:
    """Integer basis of the rational nullspace of ``rows`` (list of int lists)."""
    mat = [[Fraction(v) for v in row] for row in rows]
    pivots = []
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(mat)) if mat[i][col] != 0), None)
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        pv = mat[r][col]
        mat[r] = [v / pv for v in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][col] != 0:
                f = mat[i][col]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[r])]
        pivots.append(col)
        r += 1
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fcol in free:
        vec = [Fraction(0)] * ncols
        vec[fcol] = Fraction(1)
        for i, pcol in enumerate(pivots):
            vec[pcol] = -mat[i][fcol]
        den = lcm(*(v.denominator for v in vec))
        basis.append([int(v * den) for v in vec])
    return basis


def exact_rank(rows: np.ndarray) -> tuple:
    """Rank over Q of an integer matrix and the indices of a basis of its rows.

    A basis is first selected modulo a large prime (independent mod p implies
    independent over Q) and then certified exactly: every row must be
    orthogonal to the rational nullspace of the selected rows.
    """
    rows = np.asarray(rows, dtype=np.int64)
    if rows.size == 0:
        return 0, []
    ncols = rows.shape[1]
    chosen = _select_independent_mod_p(rows)
    while True:
        basis = _nullspace_int([rows[i].tolist() for i in chosen], ncols)
        if not basis:
            return len(chosen), chosen
        kmat = np.array(basis, dtype=object).T
        bound = int(np.abs(rows).max()) * max(abs(int(v)) for b in basis for v in b) * ncols
        if bound < 2**62:
            prod = rows @ np.array(basis, dtype=np.int64).T
        else:
            prod = rows.astype(object) @ kmat
        bad = np.nonzero(np.any(prod != 0, axis=1))[0]
        if len(bad) == 0:
            return len(chosen), chosen
        chosen.append(int(bad[0]))


def affine_rank(points: np.ndarray) -> tuple:
    """Number of affinely independent points and the indices of such a subset."""
    points = np.asarray(points, dtype=np.int64)
    if len(points) == 0:
        return 0, []
    diffs = points[1:] - points[0]
    r, chosen = exact_rank(diffs)
    return r + 1, [0] + [i + 1 for i in chosen]


def polytope_dimension(g: Graph, k: int) -> int:
    pts = incidence_matrix(subpartition_masks(g, k), g.n)
    return affine_rank(pts)[0] - 1


def tight_points(g: Graph, k: int, ineq: LinearInequality) -> np.ndarray:
    vals, rhs, _, masks = lhs_values(g, k, ineq)
    return masks[vals == rhs]


def check_facet(g: Graph, k: int, ineq: LinearInequality) -> FacetReport:
    if len(components(g)) != 1:
        raise ValueError("facet checks need a connected graph")
    nk = g.n * k
    vals, rhs, _, masks = lhs_values(g, k, ineq)
    valid = bool(vals.max() <= rhs)
    tight = masks[vals == rhs]
    pts = incidence_matrix(tight, g.n)
    rank, chosen = affine_rank(pts)
    is_facet = valid and rank == nk
    cert = [Subpartition.from_masks(tight[i]) for i in chosen] if is_facet else []
    return FacetReport(len(tight), rank, nk, is_facet, valid, cert)


# ------------------------------------------------------------ perfectness


def k_sets(g: Graph, spec: MultiwaySpec) -> dict:
    """For each z in Z the components of G - Z meeting both N(z) and S."""
    comps = components(g, spec.z)
    out = {}
    for z in spec.z:
        nz = set(g.adj[z])
        out[z] = [K for K in comps if K & nz and K & spec.s]
    return out


def check_perfect(g: Graph, spec: MultiwaySpec) -> bool:
    check_multiway_spec(g, spec)
    s, c = len(spec.s), len(spec.cset)
    if s <= c:
        return False
    sizes = {z: len(v) for z, v in k_sets(g, spec).items()}
    if any(sz < s - c + 1 for sz in sizes.values()):
        return False
    if c >= 2 and not any(sz >= s - c + 2 for sz in sizes.values()):
        return False
    return True


# ---------------------------------------------------------- pairing gamma


def simple_paths(g: Graph, u: int, v: int, cap: int = 10) -> list:
    """All simple u,v-paths as vertex tuples (small graphs only)."""
    if g.n > cap:
        raise GuardExceeded(f"path enumeration capped at n <= {cap}")
    out = []
    stack = [(u, (u,), 1 << u)]
    while stack:
        a, path, seen = stack.pop()
        if a == v:
            out.append(path)
            continue
        for b in sorted(g.adj[a], reverse=True):
            if not seen >> b & 1:
                stack.append((b, path + (b,), seen | 1 << b))
    return sorted(out)


def pairing_gamma(g: Graph, cset, delegates, z, pivot: str = "first") -> dict:
    """The gamma of a pairing inequality for a fixed pivot rule.

    Each simple u_c,v_c-path pivots at its first (or last) vertex in Z seen
    from u_c.  gamma_{z,c} = 0 when no path of c pivots at z, or when some
    other class b has both delegates on every path of c pivoting at z.
    """
    z = frozenset(z)
    gamma = {}
    for c in cset:
        u, v = delegates[c]
        by_pivot = {}
        for path in simple_paths(g, u, v):
            hits = [w for w in path if w in z]
            if not hits:
                raise ValueError(f"Z does not separate the delegates of class {c}")
            p = hits[0] if pivot == "first" else hits[-1]
            by_pivot.setdefault(p, []).append(set(path))
        for w in z:
            paths = by_pivot.get(w)
            blocked = paths is None or any(
                all(set(delegates[b]) <= P for P in paths) for b in cset if b != c)
            gamma[(w, c)] = 0 if blocked else 1
    return gamma


# ------------------------------------------------- exhaustive separation


def _to_ints(x, n, k):
    vals = [Fraction(x[v][c]) for v in range(n) for c in range(k)]
    ints, den = _scaled(vals)
    return np.array(ints, dtype=object if max(map(abs, ints), default=0) > 2**40 else np.int64).reshape(n, k), den


def _best(cands):
    """Highest (violation, inequality) pair with positive violation."""
    best = None
    for viol, ineq in cands:
        if viol > 0 and (best is None or viol > best[0]):
            best = (viol, ineq)
    return best


def _orientations(edges):
    for bits in range(1 << len(edges)):
        yield tuple((a, b) if bits >> i & 1 == 0 else (b, a) for i, (a, b) in enumerate(edges))


def set_partitions(items):
    """All set partitions of ``items`` (restricted growth order)."""
    items = list(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        yield [[first]] + part
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]


def _sep_cover(g, k, x):
    return _best((sum(Fraction(x[v][c]) for c in range(k)) - 1, make_cover(v, k)) for v in range(g.n))


def _sep_connectivity(g, k, x, cap=12):
    _check_size(g, cap)
    best = None
    for u in range(g.n):
        for v in range(u + 1, g.n):
            if g.has_edge(u, v):
                continue
            others = [w for w in range(g.n) if w not in (u, v)]
            seps = []
            for r in range(len(others) + 1):
                for z in itertools.combinations(others, r):
                    if v not in _reach(g, u, set(z)):
                        seps.append(z)
            for c in range(k):
                for z in seps:
                    viol = Fraction(x[u][c]) + Fraction(x[v][c]) - sum(Fraction(x[w][c]) for w in z) - 1
                    if viol > 0 and (best is None or viol > best[0]):
                        best = (viol, make_connectivity(g, u, v, z, c))
    return best


def _reach(g, u, blocked):
    seen = {u}
    stack = [u]
    while stack:
        a = stack.pop()
        for b in g.adj[a]:
            if b not in seen and b not in blocked:
                seen.add(b)
                stack.append(b)
    return seen


def _sep_indegree(g, k, x, max_edges=14):
    if g.m > max_edges:
        raise GuardExceeded(f"indegree enumeration capped at m <= {max_edges}")
    best = None
    for arcs in _orientations(g.edges):
        for c in range(k):
            ineq = make_indegree(g, arcs, c)
            viol = ineq.violation(x)
            if viol > 0 and (best is None or viol > best[0]):
                best = (viol, ineq)
    return best


def _sep_gencon(g, k, x, max_n=7, max_edges=14):
    if g.n > max_n or g.m > max_edges:
        raise GuardExceeded(f"gencon enumeration capped at n <= {max_n}, m <= {max_edges}")
    xi, den = _to_ints(x, g.n, k)
    best = None
    for part in set_partitions(range(g.n)):
        where = {v: i for i, b in enumerate(part) for v in b}
        cross = [(a, b) for a, b in g.edges if where[a] != where[b]]
        e = len(cross)
        bits = ((np.arange(1 << e)[:, None] >> np.arange(e)[None, :]) & 1).astype(bool)
        # dh[o, v] = number of blocks sending an arc into v under orientation o
        ind = {}
        for i, (a, b) in enumerate(cross):
            # bit 0: a -> b ; bit 1: b -> a
            for tail, head, on in ((a, b, ~bits[:, i]), (b, a, bits[:, i])):
                key = (head, where[tail])
                ind[key] = ind[key] | on if key in ind else on
        for c in range(k):
            col = xi[:, c]
            pen = np.zeros(1 << e, dtype=col.dtype)
            for (head, _), on in ind.items():
                pen = pen + on * col[head]
            gain = sum(max(col[v] for v in b) for b in part)
            o = int(np.argmin(pen))
            viol = Fraction(int(gain - pen[o]), den) - 1
            if viol > 0 and (best is None or viol > best[0]):
                arcs = tuple((a, b) if not bits[o, i] else (b, a) for i, (a, b) in enumerate(cross))
                s = frozenset(max(b, key=lambda v: (col[v], -v)) for b in part)
                spec = GenConSpec(s, tuple(frozenset(b) for b in part), arcs, c)
                best = (viol, make_gencon(g, spec))
    return best


def _sep_multiway(g, k, x, max_n=7):
    _check_size(g, max_n)
    best = None
    verts = range(g.n)
    stables = [s for r in range(1, g.n + 1) for s in itertools.combinations(verts, r)
               if all(not g.has_edge(a, b) for a, b in itertools.combinations(s, 2))]
    csets = [cs for r in range(1, k + 1) for cs in itertools.combinations(range(k), r)]
    for s in stables:
        sset = frozenset(s)
        rest = [v for v in verts if v not in sset]
        cuts = []
        for r in range(len(rest) + 1):
            for z in itertools.combinations(rest, r):
                if all(len(K & sset) <= 1 for K in components(g, z)):
                    cuts.append(frozenset(z))
        for cs in csets:
            beta = max(len(s) - len(cs), 0)
            gain = sum(Fraction(x[v][c]) for v in s for c in cs)
            for z in cuts:
                pen = beta * sum(Fraction(x[v][c]) for v in z for c in cs)
                viol = gain - pen - len(cs)
                if viol > 0 and (best is None or viol > best[0]):
                    best = (viol, make_multiway(g, MultiwaySpec(cs, sset, z), k))
    return best


_SEPARATORS = {
    "cover": _sep_cover,
    "connectivity": _sep_connectivity,
    "indegree": _sep_indegree,
    "gencon": _sep_gencon,
    "multiway": _sep_multiway,
}


def find_violated_by_enumeration(g: Graph, k: int, x, family: str):
    """Most violated member of ``family`` at ``x`` (exact), or None."""
    if family not in _SEPARATORS:
        raise ValueError(f"no enumeration oracle for family {family!r}")
    best = _SEPARATORS[family](g, k, x)
    return None if best is None else best[1]


def max_violation_by_enumeration(g: Graph, k: int, x, family: str) -> Fraction:
    best = _SEPARATORS[family](g, k, x)
    return Fraction(0) if best is None else best[0]


# ------------------------------------------------------------- MWS oracle


def mws_optimum(g: Graph, weights, k: int, cap: int = 20) -> tuple:
    """Max w(U) over U with at most k components in G[U]; returns (value, U).

    Independent of the polytope machinery: subsets are scanned in order of
    decreasing weight and the first one with few enough components wins.
    """
    from .graph import mask_components

    if g.n > cap:
        raise GuardExceeded(f"MWS oracle capped at n <= {cap}")
    n = g.n
    w = np.asarray(weights, dtype=np.int64)
    masks = np.arange(1 << n, dtype=np.int64)
    bits = (masks[:, None] >> np.arange(n)[None, :]) & 1
    totals = bits @ w
    best_val, best_mask = 0, 0
    for idx in np.argsort(-totals, kind="stable"):
        val = int(totals[idx])
        if val <= best_val:
            break
        if mask_components(g.nbr_mask, int(idx)) <= k:
            best_val, best_mask = val, int(idx)
            break
    return best_val, frozenset(v for v in range(n) if best_mask >> v & 1)
