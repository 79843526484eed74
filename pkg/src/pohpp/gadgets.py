"""Instance generators from Multicolored Clique and Alternating Linear
Extension seeds, with brute-force solvers for the seeds.

Colors and class members are 0-based here; the emitted name map uses
1-based labels such as ``x^1_2`` or ``chat^1,2``.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .core import DECISION, PATH, Graph, Instance, TooLarge, build_poset

MCP_MAX_CHOICES = 10**6
ALEP_MAX_N = 8


@dataclass(frozen=True)
class McpInstance:
    """``k`` color classes of ``q`` vertices each; a vertex is (color, index).

    ``edges`` holds frozensets of two vertices from different classes.
    """

    k: int
    q: int
    edges: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        for e in self.edges:
            (a, p), (b, r) = sorted(e)
            if a == b:
                raise ValueError("edge inside a color class")
            if not (0 <= a < self.k and 0 <= b < self.k and 0 <= p < self.q and 0 <= r < self.q):
                raise ValueError("edge endpoint out of range")

    @classmethod
    def from_pairs(cls, k: int, q: int, pairs: Iterable[tuple[tuple[int, int], tuple[int, int]]]) -> "McpInstance":
        return cls(k, q, frozenset(frozenset(e) for e in pairs))

    def has_edge(self, u: tuple[int, int], v: tuple[int, int]) -> bool:
        return frozenset((u, v)) in self.edges

    def cross_edges(self, i: int, j: int) -> list[tuple[int, int]]:
        """Index pairs (p, r) with v^i_p v^j_r an edge, in lexicographic order."""
        return [(p, r) for p in range(self.q) for r in range(self.q) if self.has_edge((i, p), (j, r))]

    def padded(self, q: int) -> "McpInstance":
        """Same instance with classes grown to ``q`` by isolated vertices."""
        return McpInstance(self.k, max(q, self.q), self.edges)

    def cross_slots(self, i: int, j: int, floor: int = 1) -> list[tuple[int, int, int]]:
        """Edge-vertex slots (p, r, copy) for the pair (i, j).

        Every cross edge gets one slot; a nonempty pair with fewer than
        ``floor`` edges repeats its edges cyclically until it has ``floor``
        slots. Copies carry the same precedence constraints as the original.
        """
        base = self.cross_edges(i, j)
        slots = [(p, r, 0) for p, r in base]
        t = 0
        while base and len(slots) < floor:
            p, r = base[t % len(base)]
            slots.append((p, r, t // len(base) + 1))
            t += 1
        return slots


@dataclass(frozen=True)
class AlepInstance:
    """Sets A = {0..n-1} and B = {n..2n-1} with constraints oriented from A to B."""

    n: int
    constraints: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        for a, b in self.constraints:
            if not (0 <= a < self.n <= b < 2 * self.n):
                raise ValueError(f"constraint ({a},{b}) is not oriented from A to B")


def random_mcp(rng: random.Random, k: int, q: int, density: float = 0.5, plant: bool = False) -> McpInstance:
    pairs = []
    for i, j in itertools.combinations(range(k), 2):
        for p in range(q):
            for r in range(q):
                if rng.random() < density:
                    pairs.append(((i, p), (j, r)))
    if plant:
        pick = [rng.randrange(q) for _ in range(k)]
        for i, j in itertools.combinations(range(k), 2):
            pairs.append(((i, pick[i]), (j, pick[j])))
    return McpInstance.from_pairs(k, q, pairs)


def random_alep(rng: random.Random, n: int, density: float = 0.4) -> AlepInstance:
    cons = tuple((a, n + b) for a in range(n) for b in range(n) if rng.random() < density)
    return AlepInstance(n, cons)


# ----------------------------------------------------------------- builder


class _Builder:
    def __init__(self):
        self.names: list[str] = []
        self.index: dict[str, int] = {}
        self.edges: set[tuple[int, int]] = set()
        self.pairs: list[tuple[int, int]] = []

    def add(self, name: str) -> int:
        self.index[name] = len(self.names)
        self.names.append(name)
        return self.index[name]

    def link(self, u: int, v: int) -> None:
        self.edges.add((min(u, v), max(u, v)))

    def join(self, u: int, group: Iterable[int]) -> None:
        for v in group:
            self.link(u, v)

    def chain(self, seq: Sequence[int]) -> None:
        for a, b in zip(seq, seq[1:]):
            self.link(a, b)

    def clique(self, group: Sequence[int]) -> None:
        for a, b in itertools.combinations(group, 2):
            self.link(a, b)

    def before(self, a: int, b: int) -> None:
        self.pairs.append((a, b))

    def build(self, certificates: dict, meta: dict) -> Instance:
        n = len(self.names)
        g = Graph.from_edges(n, sorted(self.edges))
        poset = build_poset(n, sorted(set(self.pairs)))
        names = {str(i): nm for i, nm in enumerate(self.names)}
        return Instance(g, poset, PATH, DECISION, certificates, names, meta)


def _pairs(k: int) -> list[tuple[int, int]]:
    return list(itertools.combinations(range(k), 2))


def _tag(i: int, j: int | None = None) -> str:
    return f"{i + 1}" if j is None else f"{i + 1},{j + 1}"


def _wname(i: int, j: int, p: int, r: int, copy: int) -> str:
    base = f"w^{_tag(i, j)}_{p + 1},{r + 1}"
    return base if copy == 0 else f"{base}#{copy + 1}"


# ------------------------------------------------------------ distance to path


def gen_w1_d2p(m: McpInstance, variant: str = "path", hatted_in_y: bool = True, pad: bool = True) -> Instance:
    """Selection paths X^i, verification paths W^{i,j} and connectors.

    ``variant`` is ``"path"`` (consecutive subpaths linked into one long
    path) or ``"modules"`` (no links, the subpaths are separate modules).
    With ``hatted_in_y`` the path vertices x̂ are forced after z together
    with the other hatted vertices.

    Each hatted jump vertex t̂^i, d̂^{i,j} sees only its own gadget, so it
    needs two unvisited gadget vertices around it (d̂^{k-1,k} may end the
    path instead). With ``pad`` the seed is first replaced by an equivalent
    one with at least 2 vertices per class and 3 edge vertices per nonempty color
    pair, by adding isolated seed vertices and repeating edge vertices
    (see :meth:`McpInstance.cross_slots`).
    """
    if variant not in ("path", "modules"):
        raise ValueError("variant must be 'path' or 'modules'")
    if pad:
        m = m.padded(2)
    floor = 3 if pad else 1
    k, q = m.k, m.q
    if k < 2 or q < 1:
        raise ValueError("need k >= 2 and q >= 1")
    b = _Builder()
    X: list[list[int]] = []
    xs: list[list[int]] = []
    xhats: list[int] = []
    that: list[int] = []
    for i in range(k):
        path = []
        row = []
        for p in range(q):
            v = b.add(f"x^{_tag(i)}_{p + 1}")
            row.append(v)
            path.append(v)
            h = b.add(f"xhat^{_tag(i)}_{p + 1}")
            path.append(h)
            xhats.append(h)
        b.chain(path)
        X.append(path)
        xs.append(row)
        t = b.add(f"that^{_tag(i)}")
        b.join(t, path)
        that.append(t)
    W: dict[tuple[int, int], list[int]] = {}
    wv: dict[tuple[int, int, int, int, int], int] = {}
    dhat = {}
    for i, j in _pairs(k):
        path = []
        for p, r, copy in m.cross_slots(i, j, floor):
            v = b.add(_wname(i, j, p, r, copy))
            wv[(i, j, p, r, copy)] = v
            path.append(v)
        b.chain(path)
        W[(i, j)] = path
        d = b.add(f"dhat^{_tag(i, j)}")
        b.join(d, path)
        dhat[(i, j)] = d
    psi = [X[i] for i in range(k)] + [W[ij] for ij in _pairs(k)]
    s, shat = [], []
    for i in range(k):
        s.append(b.add(f"s^{_tag(i)}"))
        shat.append(b.add(f"shat^{_tag(i)}"))
        for v in (s[i], shat[i]):
            b.join(v, X[i])
            if i > 0:
                b.join(v, X[i - 1])
    c, chat = {}, {}
    for idx, (i, j) in enumerate(_pairs(k)):
        prev = psi[k + idx - 1]
        c[(i, j)] = b.add(f"c^{_tag(i, j)}")
        chat[(i, j)] = b.add(f"chat^{_tag(i, j)}")
        for v in (c[(i, j)], chat[(i, j)]):
            b.join(v, W[(i, j)])
            b.join(v, prev)
    z = b.add("z")
    b.join(z, W[(k - 2, k - 1)])
    b.link(z, shat[0])
    if variant == "path":
        nonempty = [p for p in psi if p]
        for left, right in zip(nonempty, nonempty[1:]):
            b.link(left[-1], right[0])
    # precedence
    for v in range(len(b.names)):
        if v != s[0]:
            b.before(s[0], v)
    Y = list(shat) + that[: k - 1] + [chat[ij] for ij in _pairs(k)] + [dhat[ij] for ij in _pairs(k)]
    if hatted_in_y:
        Y += xhats
    for y in Y:
        b.before(z, y)
    for (i, j, p, r, _), w in wv.items():
        b.before(xs[i][p], w)
        b.before(xs[j][r], w)
    on_psi = {v for p in psi for v in p}
    off = sorted(v for v in range(len(b.names)) if v not in on_psi)
    meta = {"generator": "mcp-d2p", "variant": variant, "k": k, "q": q}
    return b.build({"deletion_vertices": tuple(off)}, meta)


# ---------------------------------------------------------- distance to clique


def gen_w1_d2c(m: McpInstance, variant: str = "clique", pad: bool = True) -> Instance:
    """Selection cliques X^i, verification cliques W^{i,j} and connectors.

    ``variant`` is ``"clique"`` (all gadget cliques merged into one clique)
    or ``"cluster-modules"`` (gadget cliques kept apart). With ``pad`` the
    seed is first replaced by an equivalent one with at least 2 vertices per
    class and 2 edge vertices per nonempty color pair: s^1 must leave X^1 towards s^2
    through an unselected vertex, and each ĉ^{i,j} and the final ẑ must be
    entered from an unvisited W-vertex.
    """
    if variant not in ("clique", "cluster-modules"):
        raise ValueError("variant must be 'clique' or 'cluster-modules'")
    if pad:
        m = m.padded(2)
    floor = 2 if pad else 1
    k, q = m.k, m.q
    if k < 2 or q < 1:
        raise ValueError("need k >= 2 and q >= 1")
    b = _Builder()
    X: list[list[int]] = []
    for i in range(k):
        X.append([b.add(f"x^{_tag(i)}_{p + 1}") for p in range(q)])
    W: dict[tuple[int, int], list[int]] = {}
    wv: dict[tuple[int, int, int, int, int], int] = {}
    for i, j in _pairs(k):
        W[(i, j)] = []
        for p, r, copy in m.cross_slots(i, j, floor):
            v = b.add(_wname(i, j, p, r, copy))
            wv[(i, j, p, r, copy)] = v
            W[(i, j)].append(v)
    groups = [X[i] for i in range(k)] + [W[ij] for ij in _pairs(k)]
    if variant == "clique":
        b.clique([v for grp in groups for v in grp])
    else:
        for grp in groups:
            b.clique(grp)
    s, shat, that = [], [], []
    for i in range(k):
        s.append(b.add(f"s^{_tag(i)}"))
        shat.append(b.add(f"shat^{_tag(i)}"))
        that.append(b.add(f"that^{_tag(i)}") if i < k - 1 else None)
        b.join(s[i], X[i])
        if i > 0:
            b.join(s[i], X[i - 1])
        b.join(shat[i], X[i])
        if that[i] is not None:
            b.join(that[i], X[i])
        if i > 0:
            b.link(shat[i], that[i - 1])
    c, chat = {}, {}
    for idx, (i, j) in enumerate(_pairs(k)):
        prev = groups[k + idx - 1]
        c[(i, j)] = b.add(f"c^{_tag(i, j)}")
        chat[(i, j)] = b.add(f"chat^{_tag(i, j)}")
        for v in (c[(i, j)], chat[(i, j)]):
            b.join(v, W[(i, j)])
            b.join(v, prev)
    z = b.add("z")
    zhat = b.add("zhat")
    last = W[(k - 2, k - 1)]
    b.join(z, last)
    b.join(zhat, last)
    b.link(z, shat[0])
    n = len(b.names)
    for v in range(n):
        if v != s[0]:
            b.before(s[0], v)
        if v != zhat:
            b.before(v, zhat)
    for a, bb in zip(s, s[1:]):
        b.before(a, bb)
    hat_chain = [z]
    for i in range(k):
        hat_chain.append(shat[i])
        if that[i] is not None:
            hat_chain.append(that[i])
    for a, bb in zip(hat_chain, hat_chain[1:]):
        b.before(a, bb)
    cs = [c[ij] for ij in _pairs(k)]
    for a, bb in itertools.combinations(cs, 2):
        b.before(a, bb)
    b.before(c[(k - 2, k - 1)], z)
    for (i, j, p, r, _), w in wv.items():
        b.before(c[(i, j)], w)
        for pp in range(q):
            if pp != p:
                b.before(X[i][pp], w)
            if pp != r:
                b.before(X[j][pp], w)
    in_gadget = {v for grp in groups for v in grp}
    off = sorted(v for v in range(n) if v not in in_gadget)
    meta = {"generator": "mcp-d2c", "variant": variant, "k": k, "q": q}
    return b.build({"deletion_vertices": tuple(off)}, meta)


# ------------------------------------------------------ edge clique cover 3


def gen_ecc(a: AlepInstance) -> Instance:
    """Five groups A, B, X, Y, Z of size n; every edge except X-B, X-Y, Y-A."""
    n = a.n
    if n < 1:
        raise ValueError("need n >= 1")
    b = _Builder()
    A = [b.add(f"a_{i + 1}") for i in range(n)]
    B = [b.add(f"b_{i + 1}") for i in range(n)]
    X = [b.add(f"x_{i + 1}") for i in range(n)]
    Y = [b.add(f"y_{i + 1}") for i in range(n)]
    Z = [b.add(f"z_{i + 1}") for i in range(n)]
    c1, c2, c3 = A + X + Z, A + B + Z, B + Y + Z
    for cl in (c1, c2, c3):
        b.clique(cl)
    for v in range(5 * n):
        if v != X[0]:
            b.before(X[0], v)
    chain = [v for i in range(n) for v in (X[i], Y[i], Z[i])]
    for u, v in zip(chain, chain[1:]):
        b.before(u, v)
    for u, v in a.constraints:
        b.before(A[u], B[v - n])
    certs = {
        "clique_cover": [sorted(c1), sorted(c3)],
        "edge_clique_cover": [sorted(c1), sorted(c2), sorted(c3)],
    }
    return b.build(certs, {"generator": "ecc", "n": n})


# ------------------------------------------------------------ seed solvers


def solve_mcp_bruteforce(m: McpInstance) -> tuple[int, ...] | None:
    """One index per color forming a clique, lexicographically first, or None."""
    if m.q**m.k > MCP_MAX_CHOICES:
        raise TooLarge(f"q^k = {m.q ** m.k} exceeds {MCP_MAX_CHOICES}")
    pick: list[int] = []

    def extend(i: int) -> bool:
        if i == m.k:
            return True
        for p in range(m.q):
            if all(m.has_edge((j, pick[j]), (i, p)) for j in range(i)):
                pick.append(p)
                if extend(i + 1):
                    return True
                pick.pop()
        return False

    return tuple(pick) if extend(0) else None


def solve_alep_bruteforce(a: AlepInstance) -> tuple[int, ...] | None:
    """Linear extension alternating A, B, A, B, ... (lexicographically first)."""
    n = a.n
    if n > ALEP_MAX_N:
        raise TooLarge(f"alternating extension search limited to n <= {ALEP_MAX_N}")
    preds = [0] * (2 * n)
    for u, v in a.constraints:
        preds[v] |= 1 << u
    order: list[int] = []

    def extend(seen: int) -> bool:
        if len(order) == 2 * n:
            return True
        side = range(n) if len(order) % 2 == 0 else range(n, 2 * n)
        for v in side:
            if seen >> v & 1 or preds[v] & ~seen:
                continue
            order.append(v)
            if extend(seen | (1 << v)):
                return True
            order.pop()
        return False

    return tuple(order) if extend(0) else None
