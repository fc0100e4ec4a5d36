"""Seeded instance generators and the on-disk formats.

On disk, vertices and classes are 1-based; in memory they are 0-based.

Instance::

    p cks <n> <m> <k>
    w <v> <weight>        (n lines)
    e <u> <v>             (m lines, u < v)

Solution: ``s <objective>`` then ``c <class> <v> ...`` per non-empty class.
Point: lines ``v c value`` with values as ``p/q`` or decimals.
Spec (multiway / pairing data): ``C <classes>``, ``S <vertices>``,
``Z <vertices>`` and ``D <class> <u> <v>`` lines.
"""

from dataclasses import dataclass
from fractions import Fraction

from .branchcut import WeightedInstance
from .graph import Graph
from .inequalities import MultiwaySpec

MASK64 = (1 << 64) - 1


class ParseError(ValueError):
    pass


# ------------------------------------------------------------------ PRNG


def _splitmix64(state):
    state = (state + 0x9E3779B97F4A7C15) & MASK64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return state, z ^ (z >> 31)


def _rotl(x, r):
    return ((x << r) | (x >> (64 - r))) & MASK64


class Xoshiro256:
    """xoshiro256** seeded through splitmix64 (portable, reproducible)."""

    def __init__(self, seed: int):
        st = seed & MASK64
        s = []
        for _ in range(4):
            st, z = _splitmix64(st)
            s.append(z)
        self.s = s

    def next_u64(self) -> int:
        s = self.s
        result = (_rotl((s[1] * 5) & MASK64, 7) * 9) & MASK64
        t = (s[1] << 17) & MASK64
        s[2] ^= s[0]
        s[3] ^= s[1]
        s[1] ^= s[2]
        s[0] ^= s[3]
        s[2] ^= t
        s[3] = _rotl(s[3], 45)
        return result

    def random(self) -> float:
        """Uniform float in [0, 1) from the top 53 bits."""
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def randint(self, lo: int, hi: int) -> int:
        """Uniform integer in [lo, hi] (rejection sampling, no modulo bias)."""
        if hi < lo:
            raise ValueError("empty range")
        span = hi - lo + 1
        limit = (1 << 64) - ((1 << 64) % span)
        while True:
            r = self.next_u64()
            if r < limit:
                return lo + r % span


# ------------------------------------------------------------ generators


@dataclass(frozen=True)
class GeneratorSpec:
    model: str = "er"
    n: int = 100
    p: float = 0.05
    k: int = 2
    seed: int = 0
    weight_range: tuple = (-50, 50)

    def __post_init__(self):
        if self.model not in ("er", "bipartite"):
            raise ValueError(f"unknown model {self.model!r}")
        if not 0 <= self.p <= 1:
            raise ValueError("p must lie in [0, 1]")
        if self.n < 1:
            raise ValueError("n must be positive")
        if self.k < 1:
            raise ValueError("k must be positive")
        if self.model == "bipartite" and self.n % 2:
            raise ValueError("bipartite instances need an even n")

    @property
    def name(self) -> str:
        return f"{self.model}_n{self.n}_p{self.p:g}_k{self.k}_s{self.seed}"


def gen_er(spec: GeneratorSpec) -> WeightedInstance:
    """G(n, p) over pairs i < j in lexicographic order, then vertex weights."""
    rng = Xoshiro256(spec.seed)
    n = spec.n
    edges = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < spec.p]
    lo, hi = spec.weight_range
    weights = tuple(rng.randint(lo, hi) for _ in range(n))
    return WeightedInstance(Graph(n, edges), weights, spec.k, spec.name)


def gen_bipartite(spec: GeneratorSpec) -> WeightedInstance:
    """Halves {0..n/2-1} (weights in [-50,0]) and {n/2..n-1} (weights in [0,50])."""
    if spec.n % 2:
        raise ValueError("bipartite instances need an even n")
    rng = Xoshiro256(spec.seed)
    half = spec.n // 2
    edges = [(i, j) for i in range(half) for j in range(half, spec.n) if rng.random() < spec.p]
    weights = tuple(rng.randint(-50, 0) for _ in range(half)) + tuple(
        rng.randint(0, 50) for _ in range(half))
    return WeightedInstance(Graph(spec.n, edges), weights, spec.k, spec.name)


def generate(spec: GeneratorSpec) -> WeightedInstance:
    return gen_er(spec) if spec.model == "er" else gen_bipartite(spec)


# ---------------------------------------------------------------- formats


def format_instance(inst: WeightedInstance) -> str:
    g = inst.graph
    lines = [f"p cks {g.n} {g.m} {inst.k}"]
    lines += [f"w {v + 1} {w}" for v, w in enumerate(inst.weights)]
    lines += [f"e {u + 1} {v + 1}" for u, v in g.edges]
    return "\n".join(lines) + "\n"


def write_instance(path, inst: WeightedInstance):
    with open(path, "w") as fh:
        fh.write(format_instance(inst))


def _ints(tokens, lineno):
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise ParseError(f"line {lineno}: expected integers, got {' '.join(tokens)!r}") from None


def parse_instance(text: str, name: str = "") -> WeightedInstance:
    header = None
    weights = {}
    edges = []
    seen = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tok = line.split()
        if header is None:
            if tok[0] != "p" or len(tok) != 5 or tok[1] != "cks":
                raise ParseError(f"line {lineno}: expected header 'p cks <n> <m> <k>'")
            header = _ints(tok[2:], lineno)
            n, m, k = header
            if n < 1 or m < 0 or k < 1:
                raise ParseError(f"line {lineno}: invalid sizes in header")
            continue
        if tok[0] == "w":
            if len(tok) != 3:
                raise ParseError(f"line {lineno}: expected 'w <v> <weight>'")
            v, w = _ints(tok[1:], lineno)
            if not 1 <= v <= n:
                raise ParseError(f"line {lineno}: vertex {v} out of range")
            if v in weights:
                raise ParseError(f"line {lineno}: duplicate weight for vertex {v}")
            weights[v] = w
        elif tok[0] == "e":
            if len(tok) != 3:
                raise ParseError(f"line {lineno}: expected 'e <u> <v>'")
            u, v = _ints(tok[1:], lineno)
            if u == v:
                raise ParseError(f"line {lineno}: self-loop at vertex {u}")
            if not (1 <= u <= n and 1 <= v <= n):
                raise ParseError(f"line {lineno}: edge endpoint out of range")
            if u > v:
                raise ParseError(f"line {lineno}: edges must be listed with u < v")
            if (u, v) in seen:
                raise ParseError(f"line {lineno}: duplicate edge {u} {v}")
            seen.add((u, v))
            edges.append((u - 1, v - 1))
        else:
            raise ParseError(f"line {lineno}: unknown record {tok[0]!r}")
    if header is None:
        raise ParseError("line 1: missing header 'p cks <n> <m> <k>'")
    if len(weights) != n:
        raise ParseError(f"expected {n} weight lines, found {len(weights)}")
    if len(edges) != m:
        raise ParseError(f"header announces {m} edges, found {len(edges)}")
    return WeightedInstance(Graph(n, edges), tuple(weights[v] for v in range(1, n + 1)), k, name)


def read_instance(path) -> WeightedInstance:
    with open(path) as fh:
        text = fh.read()
    stem = str(path).rsplit("/", 1)[-1].rsplit(".", 1)[0]
    try:
        return parse_instance(text, stem)
    except ParseError as exc:
        raise ParseError(f"{path}: {exc}") from None


def format_solution(objective: int, classes) -> str:
    lines = [f"s {objective}"]
    for c, block in enumerate(classes):
        if block:
            lines.append(f"c {c + 1} " + " ".join(str(v + 1) for v in sorted(block)))
    return "\n".join(lines) + "\n"


def write_solution(path, objective: int, classes):
    with open(path, "w") as fh:
        fh.write(format_solution(objective, classes))


def parse_solution(text: str, k: int) -> tuple:
    objective = None
    classes = [set() for _ in range(k)]
    for lineno, raw in enumerate(text.splitlines(), 1):
        tok = raw.split()
        if not tok or tok[0].startswith("#"):
            continue
        if tok[0] == "s":
            objective = _ints(tok[1:2], lineno)[0]
        elif tok[0] == "c":
            vals = _ints(tok[1:], lineno)
            if not 1 <= vals[0] <= k:
                raise ParseError(f"line {lineno}: class {vals[0]} out of range")
            classes[vals[0] - 1] |= {v - 1 for v in vals[1:]}
        else:
            raise ParseError(f"line {lineno}: unknown record {tok[0]!r}")
    if objective is None:
        raise ParseError("missing 's <objective>' line")
    return objective, tuple(frozenset(c) for c in classes)


def parse_point(text: str, n: int, k: int) -> list:
    x = [[Fraction(0)] * k for _ in range(n)]
    for lineno, raw in enumerate(text.splitlines(), 1):
        tok = raw.split()
        if not tok or tok[0].startswith("#"):
            continue
        if len(tok) != 3:
            raise ParseError(f"line {lineno}: expected 'v c value'")
        v, c = _ints(tok[:2], lineno)
        if not (1 <= v <= n and 1 <= c <= k):
            raise ParseError(f"line {lineno}: entry ({v},{c}) outside {n}x{k}")
        try:
            val = Fraction(tok[2])
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"line {lineno}: bad value {tok[2]!r}") from None
        if not 0 <= val <= 1:
            raise ParseError(f"line {lineno}: value outside [0, 1]")
        x[v - 1][c - 1] = val
    return x


def read_point(path, n: int, k: int) -> list:
    with open(path) as fh:
        return parse_point(fh.read(), n, k)


def format_point(x) -> str:
    lines = []
    for v, row in enumerate(x):
        for c, val in enumerate(row):
            if val:
                q = Fraction(val)
                txt = str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"
                lines.append(f"{v + 1} {c + 1} {txt}")
    return "\n".join(lines) + "\n"


def parse_spec(text: str) -> dict:
    """Returns ``{"C": tuple, "S": frozenset, "Z": frozenset, "D": {c: (u, v)}}`` (0-based)."""
    out = {"C": (), "S": frozenset(), "Z": frozenset(), "D": {}}
    seen = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        tok = raw.split("#", 1)[0].split()
        if not tok:
            continue
        key, vals = tok[0], [v - 1 for v in _ints(tok[1:], lineno)]
        if min(vals, default=0) < 0:
            raise ParseError(f"line {lineno}: indices are 1-based")
        if key == "D":
            if len(vals) != 3:
                raise ParseError(f"line {lineno}: expected 'D <class> <u> <v>'")
            if vals[0] in out["D"]:
                raise ParseError(f"line {lineno}: duplicate delegates for class {vals[0] + 1}")
            out["D"][vals[0]] = (vals[1], vals[2])
        elif key in ("C", "S", "Z"):
            if key in seen:
                raise ParseError(f"line {lineno}: duplicate {key} line")
            seen.add(key)
            out[key] = tuple(vals) if key == "C" else frozenset(vals)
        else:
            raise ParseError(f"line {lineno}: unknown record {key!r}")
    return out


def read_spec(path) -> dict:
    with open(path) as fh:
        return parse_spec(fh.read())


def multiway_from_spec(spec: dict) -> MultiwaySpec:
    if not spec["C"]:
        raise ParseError("multiway spec needs a 'C' line")
    return MultiwaySpec(spec["C"], spec["S"], spec["Z"])
