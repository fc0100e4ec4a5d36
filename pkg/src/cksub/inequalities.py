"""Linear inequalities over the (vertex, class) variable space.

Variables are ``x[v][c]`` for vertex ``v`` and class ``c``.  Coefficients are
exact ``Fraction`` values; callers that need floats convert at their boundary.
"""

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .graph import Graph, as_partition, block_index, components, separates

FAMILIES = ("cover", "connectivity", "indegree", "gencon", "multiway", "pairing", "other")


@dataclass(frozen=True)
class LinearInequality:
    """``sum coeffs[(v, c)] * x[v][c] <= rhs``.

    ``coeffs`` is a sorted tuple of ``((v, c), coef)`` pairs without zeros, so
    two inequalities compare equal exactly when their coefficients and rhs do;
    the family tag is metadata and ignored by ``==``.
    """

    coeffs: tuple
    rhs: Fraction
    family: str = field(default="other", compare=False)

    @classmethod
    def build(cls, terms, rhs, family="other"):
        """Accumulate ``terms`` (iterable of ((v, c), coef)) into canonical form."""
        if family not in FAMILIES:
            raise ValueError(f"unknown family {family!r}")
        acc = {}
        for (v, c), a in terms:
            if v < 0 or c < 0:
                raise ValueError(f"negative index ({v},{c})")
            acc[(v, c)] = acc.get((v, c), 0) + Fraction(a)
        items = tuple(sorted((key, a) for key, a in acc.items() if a != 0))
        return cls(items, Fraction(rhs), family)

    def as_dict(self) -> dict:
        return dict(self.coeffs)

    def support(self):
        return [key for key, _ in self.coeffs]

    def max_vertex(self) -> int:
        return max((v for (v, _), _ in self.coeffs), default=-1)

    def max_class(self) -> int:
        return max((c for (_, c), _ in self.coeffs), default=-1)

    def check_dims(self, n: int, k: int):
        for (v, c), _ in self.coeffs:
            if not (0 <= v < n and 0 <= c < k):
                raise ValueError(f"variable ({v},{c}) outside {n}x{k} space")

    def evaluate(self, x):
        return evaluate(self, x)

    def violation(self, x):
        return evaluate(self, x) - self.rhs

    def dense(self, n: int, k: int):
        """Coefficients as a flat list indexed ``v*k + c``."""
        self.check_dims(n, k)
        out = [Fraction(0)] * (n * k)
        for (v, c), a in self.coeffs:
            out[v * k + c] = a
        return out

    def __str__(self):
        return format_inequality(self)


def evaluate(ineq: LinearInequality, x):
    """Left-hand side ``pi . x`` for a point indexable as ``x[v][c]``."""
    n = len(x)
    total = 0
    for (v, c), a in ineq.coeffs:
        if v >= n or c >= len(x[v]):
            raise ValueError(f"point has no entry for ({v},{c})")
        total += a * x[v][c]
    return total


def zero_point(n: int, k: int):
    return [[Fraction(0)] * k for _ in range(n)]


def point_from_entries(n: int, k: int, entries) -> list:
    """Dense point from ``(v, c, value)`` triples; missing entries are zero."""
    x = zero_point(n, k)
    for v, c, val in entries:
        if not (0 <= v < n and 0 <= c < k):
            raise ValueError(f"entry ({v},{c}) outside {n}x{k} space")
        x[v][c] = Fraction(val)
    return x


# ---------------------------------------------------------------- specs


@dataclass(frozen=True)
class GenConSpec:
    s: frozenset
    w: tuple            # partition of V(G), tuple of frozensets
    orientation: tuple  # arcs (tail, head) covering exactly the crossing edges
    cls: int


@dataclass(frozen=True)
class MultiwaySpec:
    cset: tuple
    s: frozenset
    z: frozenset


@dataclass(frozen=True)
class PairingSpec:
    cset: tuple
    delegates: dict     # class -> (u, v)
    z: frozenset
    gamma: dict = field(default_factory=dict)  # (z, class) -> 0/1, missing = 1


def _check_orientation(g: Graph, arcs, edges):
    """Every edge of ``edges`` must get exactly one direction and nothing else."""
    want = set(edges)
    got = set()
    for a, b in arcs:
        key = (a, b) if a < b else (b, a)
        if key not in want:
            raise ValueError(f"arc ({a},{b}) is not on a designated edge")
        if key in got:
            raise ValueError(f"edge {key} oriented twice")
        got.add(key)
    if got != want:
        missing = sorted(want - got)
        raise ValueError(f"edges without orientation: {missing}")


def indegrees(n: int, arcs) -> list:
    d = [0] * n
    for _, b in arcs:
        d[b] += 1
    return d


# ---------------------------------------------------------- constructors


def make_cover(v: int, k: int) -> LinearInequality:
    if k < 1:
        raise ValueError("k must be positive")
    return LinearInequality.build((((v, c), 1) for c in range(k)), 1, "cover")


def make_connectivity(g: Graph, u: int, v: int, z, cls: int) -> LinearInequality:
    """``x_u + x_v - sum_{z in Z} x_z <= 1`` in class ``cls``."""
    z = frozenset(z)
    if u == v:
        raise ValueError("u and v must be distinct")
    if g.has_edge(u, v):
        raise ValueError(f"{u} and {v} are adjacent")
    if not separates(g, u, v, z):
        raise ValueError(f"{sorted(z)} is not a {u},{v}-separator")
    terms = [((u, cls), 1), ((v, cls), 1)] + [((w, cls), -1) for w in z]
    return LinearInequality.build(terms, 1, "connectivity")


def make_indegree(g: Graph, orientation, cls: int) -> LinearInequality:
    """``sum_v (1 - d(v)) x_v <= 1`` for an orientation of every edge."""
    arcs = tuple(orientation)
    _check_orientation(g, arcs, g.edges)
    d = indegrees(g.n, arcs)
    return LinearInequality.build((((v, cls), 1 - d[v]) for v in range(g.n)), 1, "indegree")


def block_indegrees(g: Graph, partition, arcs) -> list:
    """d-hat: number of distinct blocks holding tails of arcs into each vertex."""
    where = block_index(partition)
    tails = [set() for _ in range(g.n)]
    for a, b in arcs:
        tails[b].add(where[a])
    return [len(t) for t in tails]


def make_gencon(g: Graph, spec: GenConSpec) -> LinearInequality:
    w = as_partition(g, spec.w)
    s = frozenset(spec.s)
    if len(s) != len(w) or any(len(b & s) != 1 for b in w):
        raise ValueError("S must contain exactly one vertex of every block")
    where = block_index(w)
    crossing = [(a, b) for a, b in g.edges if where[a] != where[b]]
    _check_orientation(g, spec.orientation, crossing)
    dh = block_indegrees(g, w, spec.orientation)
    terms = []
    for v in range(g.n):
        a = 1 - dh[v] if v in s else -dh[v]
        terms.append(((v, spec.cls), a))
    return LinearInequality.build(terms, 1, "gencon")


def check_multiway_spec(g: Graph, spec: MultiwaySpec):
    s, z = frozenset(spec.s), frozenset(spec.z)
    if not s:
        raise ValueError("S must be non-empty")
    if not spec.cset or len(set(spec.cset)) != len(spec.cset):
        raise ValueError("C must be a non-empty set of classes")
    if s & z:
        raise ValueError("S and Z must be disjoint")
    for a, b in g.edges:
        if a in s and b in s:
            raise ValueError(f"S is not stable: edge ({a},{b})")
    for comp in components(g, z):
        if len(comp & s) > 1:
            raise ValueError("Z is not a multiway cut of S")


def multiway_beta(spec: MultiwaySpec) -> int:
    return max(len(spec.s) - len(spec.cset), 0)


def make_multiway(g: Graph, spec: MultiwaySpec, k: int) -> LinearInequality:
    check_multiway_spec(g, spec)
    if any(not 0 <= c < k for c in spec.cset):
        raise ValueError(f"class index outside [0,{k})")
    beta = multiway_beta(spec)
    terms = []
    for c in spec.cset:
        terms += [((v, c), 1) for v in spec.s]
        terms += [((v, c), -beta) for v in spec.z]
    return LinearInequality.build(terms, len(spec.cset), "multiway")


def make_pairing(g: Graph, spec: PairingSpec) -> LinearInequality:
    z = frozenset(spec.z)
    cset = tuple(spec.cset)
    if not cset or len(set(cset)) != len(cset):
        raise ValueError("C must be a non-empty set of classes")
    if set(spec.delegates) != set(cset):
        raise ValueError("need exactly one delegate pair per class")
    for (zv, c), gam in spec.gamma.items():
        if zv not in z or c not in cset:
            raise ValueError(f"gamma entry ({zv},{c}) outside Z x C")
        if gam not in (0, 1):
            raise ValueError("gamma entries must be 0 or 1")
    terms = []
    for c in cset:
        u, v = spec.delegates[c]
        if u == v or g.has_edge(u, v):
            raise ValueError(f"delegates of class {c} must be distinct and non-adjacent")
        if u in z or v in z:
            raise ValueError(f"delegate of class {c} lies in Z")
        if not separates(g, u, v, z):
            raise ValueError(f"Z does not separate the delegates of class {c}")
        terms += [((u, c), 1), ((v, c), 1)]
        terms += [((w, c), -spec.gamma.get((w, c), 1)) for w in z]
    return LinearInequality.build(terms, len(cset), "pairing")


# ------------------------------------------------------------- text form

_INEQ_RE = re.compile(r"^\s*ineq\s+(\w+)\s+(\S+)\s*\{(.*)\}\s*$")
_TERM_RE = re.compile(r"\(\s*(\d+)\s*,\s*(\d+)\s*\)\s*:\s*(\S+)")


def _fmt(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_inequality(ineq: LinearInequality) -> str:
    """``ineq <family> <rhs> { (v,c):coef ... }`` with 1-based v and c."""
    body = " ".join(f"({v + 1},{c + 1}):{_fmt(a)}" for (v, c), a in ineq.coeffs)
    return f"ineq {ineq.family} {_fmt(ineq.rhs)} {{ {body} }}"


def parse_inequality(text: str) -> LinearInequality:
    m = _INEQ_RE.match(text)
    if not m:
        raise ValueError(f"malformed inequality: {text.strip()!r}")
    family, rhs, body = m.groups()
    terms = []
    consumed = _TERM_RE.sub("", body).strip()
    if consumed:
        raise ValueError(f"unparsable terms: {consumed!r}")
    for vs, cs, a in _TERM_RE.findall(body):
        v, c = int(vs) - 1, int(cs) - 1
        if v < 0 or c < 0:
            raise ValueError("indices are 1-based")
        terms.append(((v, c), Fraction(a)))
    return LinearInequality.build(terms, Fraction(rhs), family)


def read_inequalities(path) -> list:
    out = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            try:
                out.append(parse_inequality(line))
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: {exc}") from None
    return out


def dominant_violation(ineqs, x) -> Optional[tuple]:
    """(inequality, violation) with the largest violation, or None if ineqs empty."""
    best = None
    for ineq in ineqs:
        viol = ineq.violation(x)
        if best is None or viol > best[1]:
            best = (ineq, viol)
    return best
