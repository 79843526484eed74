"""Plane embeddings and prefix-interval dynamic programs.

In a plane graph, the vertices visited by any prefix of a Hamiltonian path
meet every face in one stretch of its boundary walk; after deleting ``k``
vertices, in at most ``k + 1`` stretches. The solvers here run a forward DP
over (visited set, last vertex) and discard every visited set that breaks
this bound on the outer walk, which keeps the reachable state space
polynomial for a fixed number of off-walk vertices.
"""
from __future__ import annotations

import itertools
from typing import Iterable, Sequence

import networkx as nx

from .core import (
    CYCLE,
    MIN,
    Embedding,
    Graph,
    Instance,
    InvalidCertificate,
    InvalidEmbedding,
    Solution,
    bits,
    popcount,
    to_mask,
)
from .transforms import cycle_via_path

# ----------------------------------------------------------------- faces


def trace_faces_raw(rotation: Sequence[Sequence[int]], active: Iterable[int]) -> list[tuple[int, ...]]:
    """Face walks of a rotation system restricted to ``active`` vertices.

    The successor of dart u->v is v->w where w follows u in the rotation of
    v. Each face is reported as the sequence of dart tails; an isolated
    vertex forms the one-vertex face ``(v,)``.
    """
    act = set(active)
    rot = {v: [u for u in rotation[v] if u in act] for v in act}
    pos = {v: {u: i for i, u in enumerate(r)} for v, r in rot.items()}
    seen: set[tuple[int, int]] = set()
    faces: list[tuple[int, ...]] = []
    for v in sorted(act):
        if not rot[v]:
            faces.append((v,))
            continue
        for u in rot[v]:
            if (v, u) in seen:
                continue
            walk = []
            a, b = v, u
            while (a, b) not in seen:
                seen.add((a, b))
                walk.append(a)
                r = rot[b]
                a, b = b, r[(pos[b][a] + 1) % len(r)]
            faces.append(tuple(walk))
    return faces


def _check_rotation(emb: Embedding, g: Graph, active: int) -> None:
    if len(emb.rotation) != g.n:
        raise InvalidEmbedding(f"rotation has {len(emb.rotation)} entries for {g.n} vertices")
    for v in range(g.n):
        rot = list(emb.rotation[v])
        if not (active >> v & 1):
            if rot:
                raise InvalidEmbedding(f"vertex {v} is outside the embedded graph but has a rotation")
            continue
        if len(set(rot)) != len(rot) or to_mask(rot) != g.adj[v] & active:
            raise InvalidEmbedding(f"rotation of vertex {v} is not a permutation of its neighbours")


def trace_faces(emb: Embedding, g: Graph, active: int | None = None) -> list[tuple[int, ...]]:
    """All faces, after checking the rotation and Euler's formula per component."""
    if active is None:
        active = g.all_mask
    _check_rotation(emb, g, active)
    faces = trace_faces_raw(emb.rotation, bits(active))
    comp_of = {}
    for i, comp in enumerate(g.components(active)):
        for v in bits(comp):
            comp_of[v] = i
    tally: dict[int, list[int]] = {}
    for v in bits(active):
        t = tally.setdefault(comp_of[v], [0, 0, 0])
        t[0] += 1
        t[1] += popcount(g.adj[v] & active)
    for f in faces:
        tally[comp_of[f[0]]][2] += 1
    for nv, deg, nf in tally.values():
        if nv - deg // 2 + nf != 2:
            raise InvalidEmbedding("rotation system is not planar (Euler check failed)")
    return faces


def _same_cycle(a: Sequence[int], b: Sequence[int]) -> bool:
    if len(a) != len(b):
        return False
    if not a:
        return True
    L = len(a)
    for seq in (list(b), list(b)[::-1]):
        for s in range(L):
            if all(a[i] == seq[(s + i) % L] for i in range(L)):
                return True
    return False


def outer_walk(emb: Embedding, g: Graph, active: int | None = None) -> tuple[int, ...]:
    """Validated outer face walk of the embedding."""
    faces = trace_faces(emb, g, active)
    walk = tuple(emb.outer_face)
    if not any(_same_cycle(walk, f) for f in faces):
        raise InvalidEmbedding("outer_face is not a face of the rotation system")
    return walk


def recognize_outerplanar(g: Graph) -> Embedding | None:
    """Embedding with every vertex on the outer walk, or None.

    Uses the apex trick: G is outerplanar iff G plus a universal vertex is
    planar, and the apex's faces merge into the outer face once it is removed.
    Only connected graphs have a single outer walk; others raise ValueError.
    """
    if g.n == 0:
        return Embedding((), ())
    if not g.is_connected():
        raise ValueError("outerplanar embeddings are produced for connected graphs only")
    if g.n == 1:
        return Embedding(((),), (0,))
    h = g.to_networkx()
    apex = g.n
    h.add_edges_from((apex, v) for v in range(g.n))
    ok, emb = nx.check_planarity(h)
    if not ok:
        return None
    rotation = tuple(tuple(u for u in emb.neighbors_cw_order(v) if u != apex) for v in range(g.n))
    faces = trace_faces_raw(rotation, range(g.n))
    everyone = set(range(g.n))
    for f in faces:
        if set(f) == everyone:
            return Embedding(rotation, f)
    return None  # pragma: no cover - the apex face always covers every vertex


# ------------------------------------------------------------- intervals


def prefix_interval_count(face: Sequence[int], prefix: Iterable[int]) -> int:
    """Fewest stretches of the cyclic walk ``face`` covering ``prefix`` on it.

    A stretch is a run of consecutive walk positions whose vertices all lie
    in the prefix; every prefix vertex on the walk must appear in some chosen
    stretch. Repeated vertices (cut vertices on the walk) need only one of
    their positions covered.
    """
    pm = to_mask(prefix)
    L = len(face)
    allowed = [bool(pm >> v & 1) for v in face]
    targets = {v for v, a in zip(face, allowed) if a}
    if not targets:
        return 0
    if all(allowed):
        return 1
    start = allowed.index(False)
    runs: list[int] = []
    cur = 0
    for i in range(1, L + 1):
        j = (start + i) % L
        if allowed[j]:
            cur |= 1 << face[j]
        elif cur:
            runs.append(cur)
            cur = 0
    if cur:
        runs.append(cur)
    need = to_mask(targets)
    # runs holding a vertex that no other run holds are forced
    chosen = 0
    covered = 0
    for i, r in enumerate(runs):
        others = 0
        for j, s in enumerate(runs):
            if j != i:
                others |= s
        if r & need & ~others:
            chosen += 1
            covered |= r
    rest = [r for r in runs if r & need & ~covered]
    need &= ~covered
    if not need:
        return chosen
    for size in range(1, len(rest) + 1):
        for combo in itertools.combinations(rest, size):
            acc = 0
            for r in combo:
                acc |= r
            if acc & need == need:
                return chosen + size
    raise AssertionError("runs always cover the prefix")  # pragma: no cover


# --------------------------------------------------------------------- DP


class _RunCounter:
    """Interval count of (prefix ∩ walk), incremental when the walk is a cycle."""

    def __init__(self, walk: Sequence[int]):
        self.walk = tuple(walk)
        self.mask = to_mask(walk)
        self.simple = len(set(walk)) == len(walk)
        L = len(walk)
        self.prev = {}
        self.next = {}
        if self.simple and L:
            for i, v in enumerate(walk):
                self.prev[v] = walk[i - 1]
                self.next[v] = walk[(i + 1) % L]

    def initial(self, S: int) -> int:
        return prefix_interval_count(self.walk, bits(S))

    def add(self, S: int, runs: int, v: int) -> int:
        """Interval count after adding ``v`` to ``S`` (which had ``runs``)."""
        if not (self.mask >> v & 1):
            return runs
        S2 = S | (1 << v)
        if not self.simple:
            return prefix_interval_count(self.walk, bits(S2))
        if S2 & self.mask == self.mask:
            return 1
        return runs + 1 - (S >> self.prev[v] & 1) - (S >> self.next[v] & 1)


def _interval_dp(inst: Instance, walk: Sequence[int], limit: int, stats: dict | None) -> Solution | None:
    g = inst.graph
    n = g.n
    adj = g.adj
    pred = inst.poset.pred
    weighted = inst.objective == MIN
    full = g.all_mask
    rc = _RunCounter(walk)
    layer: dict[tuple[int, int], int] = {}
    runs_of: dict[int, int] = {}
    parents: list[dict[tuple[int, int], int]] = []
    for s in range(n):
        if pred[s]:
            continue
        S = 1 << s
        r = rc.initial(S)
        if r > limit:
            continue
        runs_of[S] = r
        layer[(S, s)] = 0
    parents.append({key: -1 for key in layer})
    total = len(layer)
    for _ in range(n - 1):
        nxt: dict[tuple[int, int], int] = {}
        back: dict[tuple[int, int], int] = {}
        nruns: dict[int, int] = {}
        for (S, t), cost in layer.items():
            runs = runs_of[S]
            for v in bits(adj[t] & ~S):
                if pred[v] & ~S:
                    continue
                S2 = S | (1 << v)
                r2 = nruns.get(S2)
                if r2 is None:
                    r2 = rc.add(S, runs, v)
                    if r2 > limit:
                        continue
                    nruns[S2] = r2
                rest = full & ~S2
                if rest and _dead(adj, rest, t, v):
                    continue
                c2 = cost + (g.weight(t, v) if weighted else 0)
                key = (S2, v)
                old = nxt.get(key)
                if old is None or c2 < old:
                    nxt[key] = c2
                    back[key] = t
        layer, runs_of = nxt, nruns
        parents.append(back)
        total += len(layer)
        if not layer:
            break
    if stats is not None:
        stats["tuples"] = total
    finals = [(c, t) for (S, t), c in layer.items() if S == full]
    if not finals:
        return None
    cost, t = min(finals)
    order = [t]
    S = full
    for back in reversed(parents[1:]):
        prev = back[(S, t)]
        S &= ~(1 << t)
        t = prev
        order.append(t)
    order.reverse()
    return Solution(tuple(order), cost if weighted else 0)


def _dead(adj: Sequence[int], rest: int, t: int, v: int) -> bool:
    """True if some unvisited vertex can no longer be reached from ``v``."""
    # a neighbour of the old end with no unvisited neighbour left is stranded
    for u in bits(adj[t] & rest & ~adj[v]):
        if not adj[u] & rest:
            return True
    # a neighbour of v with no other unvisited neighbour must be visited next
    # and last, which only works if it is the only vertex left
    if rest & (rest - 1):
        for u in bits(adj[v] & rest):
            if not adj[u] & rest:
                return True
    return False


def _embedding_for(inst: Instance, emb: Embedding | None) -> Embedding:
    if emb is None:
        emb = inst.embedding
    if emb is None:
        emb = recognize_outerplanar(inst.graph) if inst.graph.is_connected() else None
        if emb is None:
            raise InvalidCertificate("no embedding given")
    return emb


def solve_inner_vertices(inst: Instance, emb: Embedding | None = None, stats: dict | None = None) -> Solution | None:
    """Min-cost or decision POHPP on a plane graph with few vertices off the outer walk.

    ``stats`` (optional dict) receives ``tuples``, the number of DP states,
    and ``bound``, the state bound for this instance when the outer walk is
    a simple cycle (checked as an assertion).
    """
    g = inst.graph
    emb = _embedding_for(inst, emb)
    walk = outer_walk(emb, g)
    if inst.variant == CYCLE:
        return cycle_via_path(inst, lambda sub: solve_inner_vertices(sub, emb))
    if g.n == 0 or not g.is_connected():
        return None
    local: dict = {}
    sol = _interval_dp(inst, walk, 1, local)
    k = g.n - len(set(walk))
    bound = 2**k * (k + 2) * g.n**2
    if len(set(walk)) == len(walk):
        assert local["tuples"] <= bound, (local["tuples"], bound)
    if stats is not None:
        stats.update(local, bound=bound, k=k)
    return sol


def solve_distance_outerplanar(
    inst: Instance, W: Sequence[int] | None = None, emb: Embedding | None = None, stats: dict | None = None
) -> Solution | None:
    """POHPP/MinPOHPP given W with G - W outerplanar and its embedding.

    G - W must be connected so that its outer face is a single walk.
    """
    g = inst.graph
    if W is None:
        W = inst.deletion_vertices
        if W is None:
            raise InvalidCertificate("no deletion vertex set given")
    W = sorted(set(W))
    if any(not 0 <= w < g.n for w in W):
        raise InvalidCertificate("deletion vertex out of range")
    host = g.all_mask & ~to_mask(W)
    if emb is None:
        emb = inst.embedding
    if emb is None:
        if host and not g.is_connected(host):
            raise InvalidCertificate("G - W must be connected")
        emb = _recognize_host(g, host)
        if emb is None:
            raise InvalidCertificate("G - W is not outerplanar")
    if host and not g.is_connected(host):
        raise InvalidCertificate("G - W must be connected")
    walk = outer_walk(emb, g, host) if host else ()
    if to_mask(walk) != host:
        raise InvalidEmbedding("outer walk misses vertices of G - W")
    if inst.variant == CYCLE:
        return cycle_via_path(inst, lambda sub: solve_distance_outerplanar(sub, W, emb))
    if g.n == 0 or not g.is_connected():
        return None
    local: dict = {}
    sol = _interval_dp(inst, walk, len(W) + 1, local)
    if stats is not None:
        stats.update(local, k=len(W))
    return sol


def _recognize_host(g: Graph, host: int) -> Embedding | None:
    verts = list(bits(host))
    index = {v: i for i, v in enumerate(verts)}
    sub = Graph.from_edges(len(verts), [(index[u], index[v]) for u, v in g.edges() if u in index and v in index])
    emb = recognize_outerplanar(sub)
    if emb is None:
        return None
    rotation = [()] * g.n
    for v in verts:
        rotation[v] = tuple(verts[u] for u in emb.rotation[index[v]])
    return Embedding(tuple(rotation), tuple(verts[u] for u in emb.outer_face))


def find_outerplanar_deletion_set(g: Graph, k: int) -> list[int] | None:
    """Smallest, then lexicographically first, W with G - W connected outerplanar."""
    for size in range(k + 1):
        for W in itertools.combinations(range(g.n), size):
            host = g.all_mask & ~to_mask(W)
            if host and not g.is_connected(host):
                continue
            if not host or _recognize_host(g, host) is not None:
                return list(W)
    return None
