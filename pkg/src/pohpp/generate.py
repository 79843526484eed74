"""Random instance families used by tests, benchmarks and ``pohpp gen``."""
from __future__ import annotations

import itertools
import random

import networkx as nx

from .core import DECISION, MIN, PATH, Embedding, Graph, Instance, build_poset
from .planar import recognize_outerplanar, trace_faces_raw


def random_poset_pairs(rng: random.Random, n: int, d: int) -> list[tuple[int, int]]:
    """``d`` constraints consistent with a hidden random permutation."""
    if n < 2 or d <= 0:
        return []
    perm = list(range(n))
    rng.shuffle(perm)
    pairs = set()
    for _ in range(d):
        i, j = sorted(rng.sample(range(n), 2))
        pairs.add((perm[i], perm[j]))
    return sorted(pairs)


def _finish(rng, n, edges, variant, objective, d, max_weight, certificates=None, names=None):
    if objective == MIN:
        edges = [(u, v, rng.randint(0, max_weight)) for u, v in edges]
        g = Graph.from_edges(n, edges, weighted=True)
    else:
        g = Graph.from_edges(n, edges)
    poset = build_poset(n, random_poset_pairs(rng, n, d))
    return Instance(g, poset, variant, objective, certificates or {}, names)


def random_instance(
    rng: random.Random,
    n: int,
    p: float = 0.5,
    d: int | None = None,
    variant: str = PATH,
    objective: str = DECISION,
    max_weight: int = 9,
) -> Instance:
    """Uniform G(n, p) with ``d`` random precedence constraints."""
    edges = [(u, v) for u, v in itertools.combinations(range(n), 2) if rng.random() < p]
    if d is None:
        d = rng.randint(0, n)
    return _finish(rng, n, edges, variant, objective, d, max_weight)


def random_block_graph(rng: random.Random, n: int, max_block: int = 4) -> Graph:
    """Connected block graph: glue random cliques at random vertices."""
    edges = []
    placed = [0]
    nxt = 1
    while nxt < n:
        size = min(rng.randint(2, max_block), n - nxt + 1)
        anchor = rng.choice(placed)
        members = [anchor] + list(range(nxt, nxt + size - 1))
        nxt += size - 1
        placed.extend(members[1:])
        edges.extend(itertools.combinations(members, 2))
    return Graph.from_edges(n, edges)


def random_path_like_block_graph(rng: random.Random, n: int, max_block: int = 4) -> Graph:
    """Block graph whose block-cut tree is a path (so often traceable)."""
    edges = []
    last = 0
    nxt = 1
    while nxt < n:
        size = min(rng.randint(2, max_block), n - nxt + 1)
        members = [last] + list(range(nxt, nxt + size - 1))
        nxt += size - 1
        edges.extend(itertools.combinations(members, 2))
        last = rng.choice(members[1:])
    return Graph.from_edges(n, edges)


def _relabel(rng, n, edges):
    perm = list(range(n))
    rng.shuffle(perm)
    return perm, [(perm[u], perm[v]) for u, v in edges]


def random_block_instance(rng, n, d=None, variant=PATH, path_like=None) -> Instance:
    if path_like is None:
        path_like = rng.random() < 0.7
    g = random_path_like_block_graph(rng, n) if path_like else random_block_graph(rng, n)
    _, edges = _relabel(rng, n, g.edges())
    if d is None:
        d = rng.randint(0, n)
    return _finish(rng, n, edges, variant, DECISION, d, 0)


def random_edge_block_instance(rng, n, k, d=None, variant=PATH) -> Instance:
    """Block graph plus ``k`` extra edges recorded as the deletion edge set."""
    g = random_path_like_block_graph(rng, n) if rng.random() < 0.6 else random_block_graph(rng, n)
    edges = set(g.edges())
    non_edges = [e for e in itertools.combinations(range(n), 2) if e not in edges]
    extra = rng.sample(non_edges, min(k, len(non_edges)))
    perm, all_edges = _relabel(rng, n, sorted(edges | set(extra)))
    F = sorted(tuple(sorted((perm[u], perm[v]))) for u, v in extra)
    if d is None:
        d = rng.randint(0, n)
    return _finish(rng, n, all_edges, variant, DECISION, d, 0, {"deletion_edges": tuple(F)})


def random_vertex_block_instance(rng, n, k, d=None, variant=PATH) -> Instance:
    """Block graph on ``n - k`` vertices plus ``k`` vertices with random attachments."""
    base = n - k
    g = random_path_like_block_graph(rng, base) if rng.random() < 0.6 else random_block_graph(rng, base)
    edges = set(g.edges())
    for w in range(base, n):
        for u in range(w):
            if rng.random() < 0.45:
                edges.add((u, w))
    perm, all_edges = _relabel(rng, n, sorted(edges))
    W = tuple(sorted(perm[w] for w in range(base, n)))
    if d is None:
        d = rng.randint(0, n)
    return _finish(rng, n, all_edges, variant, DECISION, d, 0, {"deletion_vertices": W})


def random_clique_module_instance(rng, clique: int, k: int, d=None, variant=PATH, p: float = 0.5) -> Instance:
    """Clique of size ``clique`` plus ``k`` outside vertices; the clique is a module."""
    n = clique + k
    C = list(range(clique))
    edges = set(itertools.combinations(C, 2))
    for w in range(clique, n):
        if rng.random() < 0.7:
            edges.update((c, w) for c in C)
        for u in range(clique, w):
            if rng.random() < p:
                edges.add((u, w))
    perm, all_edges = _relabel(rng, n, sorted(edges))
    W = tuple(sorted(perm[w] for w in range(clique, n)))
    if d is None:
        d = rng.randint(0, n)
    return _finish(rng, n, all_edges, variant, DECISION, d, 0, {"deletion_vertices": W})


def random_tree_plus_edges(rng, n, k) -> Graph:
    """Random tree plus up to ``k`` extra edges (feedback edge number <= k)."""
    edges = set()
    for v in range(1, n):
        u = rng.randrange(v)
        edges.add((u, v))
    non_edges = [e for e in itertools.combinations(range(n), 2) if e not in edges]
    edges.update(rng.sample(non_edges, min(k, len(non_edges))))
    _, es = _relabel(rng, n, sorted(edges))
    return Graph.from_edges(n, es)


def random_fes_instance(rng, n, k, d=None, variant=PATH, objective=DECISION) -> Instance:
    g = random_tree_plus_edges(rng, n, k)
    if d is None:
        d = rng.randint(0, n)
    return _finish(rng, n, g.edges(), variant, objective, d, 9)


# ---------------------------------------------------------------- plane graphs


def _face_gap(rotation, u, v):
    """Index in rotation[v] right after u: the slot of the face entered by u->v."""
    rot = rotation[v]
    return rot.index(u) + 1


def random_plane_graph(
    rng: random.Random, outer: int, inner: int, chords: int = 2, inner_deg: int = 3, hamiltonian: bool = False
):
    """Plane graph with an outer cycle and inner vertices; see ``_plane_graph``."""
    return _plane_graph(rng, outer, inner, chords, inner_deg, hamiltonian)[:3]


def _ring_order(ring: set) -> list[int]:
    nbrs: dict[int, list[int]] = {}
    for e in ring:
        a, b = tuple(e)
        nbrs.setdefault(a, []).append(b)
        nbrs.setdefault(b, []).append(a)
    order = [0]
    prev = None
    while len(order) < len(nbrs):
        nxt = [v for v in nbrs[order[-1]] if v != prev][0]
        prev = order[-1]
        order.append(nxt)
    return order


def _plane_graph(rng, outer, inner, chords, inner_deg, hamiltonian):
    """Plane graph with an outer cycle of ``outer >= 3`` vertices and ``inner`` vertices inside.

    Returns ``(edges, rotation, outer_face)``. Faces are traced with the rule
    ``next(u->v) = (v, rotation[v][index(u) + 1])``; all insertions happen in
    faces other than the outer one, so the result is 2-connected. With
    ``hamiltonian`` every inner vertex is spliced into an edge of a growing
    Hamiltonian cycle, so the graph stays Hamiltonian; that cycle is returned
    as a fourth item (None otherwise).
    """
    if outer < 3:
        raise ValueError("outer cycle needs at least 3 vertices")
    n = outer + inner
    rotation: list[list[int]] = [[] for _ in range(n)]
    for i in range(outer):
        rotation[i] = [(i - 1) % outer, (i + 1) % outer]
    outer_face = (0,) + tuple(range(outer - 1, 0, -1))
    outer_darts = {(outer_face[i], outer_face[(i + 1) % outer]) for i in range(outer)}

    def inner_faces(active):
        out = []
        for f in trace_faces_raw(rotation, active):
            darts = {(f[i], f[(i + 1) % len(f)]) for i in range(len(f))}
            if not darts & outer_darts:
                out.append(f)
        return out

    active = list(range(outer))
    ring = {frozenset((i, (i + 1) % outer)) for i in range(outer)}
    for z in range(outer, n):
        if hamiltonian:
            slots = [
                (f, i)
                for f in inner_faces(active)
                for i in range(len(f))
                if frozenset((f[i], f[(i + 1) % len(f)])) in ring
            ]
            f, i = rng.choice(slots)
            L = len(f)
            chosen = [i, (i + 1) % L]
            if inner_deg >= 3 and L > 3 and rng.random() < 0.5 and f[(i + 2) % L] not in (f[i], f[(i + 1) % L]):
                chosen.append((i + 2) % L)
            a, b = f[i], f[(i + 1) % L]
            ring -= {frozenset((a, b))}
            ring |= {frozenset((a, z)), frozenset((z, b))}
        else:
            f = rng.choice(inner_faces(active))
            L = len(f)
            want = max(1, min(L, rng.randint(1, inner_deg)))
            start = rng.randrange(L)
            picks = sorted(rng.sample(range(L), want))
            picks = [(start + i) % L for i in picks]
            picks = sorted(set(picks), key=lambda i: (i - start) % L)
            used = set()
            chosen = []
            for i in picks:
                if f[i] in used:
                    continue
                used.add(f[i])
                chosen.append(i)
        for i in chosen:
            a = f[i]
            prev = f[i - 1]
            rotation[a].insert(_face_gap(rotation, prev, a), z)
        rotation[z] = [f[i] for i in reversed(chosen)]
        active.append(z)
        if not _euler_ok(rotation, active):
            rotation[z] = [f[i] for i in chosen]
            if not _euler_ok(rotation, active):  # pragma: no cover
                raise RuntimeError("failed to insert vertex planarly")
    for _ in range(chords):
        faces = inner_faces(active)
        cands = []
        for f in faces:
            L = len(f)
            for i in range(L):
                for j in range(i + 2, L):
                    a, b = f[i], f[j]
                    if a != b and b not in rotation[a]:
                        cands.append((f, i, j))
        if not cands:
            break
        f, i, j = rng.choice(cands)
        a, b = f[i], f[j]
        ia = _face_gap(rotation, f[i - 1], a)
        ib = _face_gap(rotation, f[j - 1], b)
        rotation[a].insert(ia, b)
        rotation[b].insert(ib, a)
        if not _euler_ok(rotation, active):  # pragma: no cover
            raise RuntimeError("failed to insert chord planarly")
    edges = sorted({(min(u, v), max(u, v)) for u in range(n) for v in rotation[u]})
    cycle = _ring_order(ring) if hamiltonian else None
    return edges, [tuple(r) for r in rotation], outer_face, cycle


def _euler_ok(rotation, active) -> bool:
    act = set(active)
    n = len(act)
    m = sum(len(rotation[v]) for v in act) // 2
    faces = trace_faces_raw(rotation, act)
    return n - m + len(faces) == 2


def random_plane_instance(
    rng, outer, inner, chords=2, d=None, objective=MIN, variant=PATH, max_weight=9, hamiltonian=False
) -> Instance:
    """Random plane instance; with ``hamiltonian`` the graph has a known
    Hamiltonian cycle and π is drawn from it (opened at a random vertex), so
    the instance is feasible. That path is stored as ``meta["witness"]``.
    """
    edges, rotation, outer_face, cycle = _plane_graph(rng, outer, inner, chords, 3, hamiltonian)
    n = outer + inner
    if d is None:
        d = rng.randint(0, n)
    emb = Embedding(tuple(rotation), tuple(outer_face))
    inst = _finish(rng, n, edges, variant, objective, d, max_weight, {"embedding": emb})
    if not hamiltonian:
        return inst
    cut = rng.randrange(n)
    witness = cycle[cut:] + cycle[:cut]
    pairs = set()
    for _ in range(d):
        i, j = sorted(rng.sample(range(n), 2))
        pairs.add((witness[i], witness[j]))
    return inst.replace(poset=build_poset(n, sorted(pairs)), meta={"witness": witness})


def _random_outerplanar(rng, n):
    """Random tree plus edges that keep the graph outerplanar."""
    edges = {(rng.randrange(v), v) for v in range(1, n)}
    for u, v in rng.sample(list(itertools.combinations(range(n), 2)), min(n, n * (n - 1) // 2)):
        if (u, v) in edges:
            continue
        if recognize_outerplanar(Graph.from_edges(n, sorted(edges | {(u, v)}))) is not None:
            edges.add((u, v))
    emb = recognize_outerplanar(Graph.from_edges(n, sorted(edges)))
    return sorted(edges), list(emb.rotation), tuple(emb.outer_face)


def random_outerplanar_plus(rng, base: int, k: int, d=None, objective=MIN, variant=PATH, p: float = 0.5) -> Instance:
    """Outerplanar graph on ``base`` vertices plus ``k`` apex-like vertices.

    The certificate embedding describes ``G - W`` only.
    """
    if base >= 3 and rng.random() < 0.5:
        edges, rotation, outer_face = random_plane_graph(rng, base, 0, chords=rng.randint(0, base))
    else:
        edges, rotation, outer_face = _random_outerplanar(rng, base)
    n = base + k
    all_edges = set(edges)
    for w in range(base, n):
        for u in range(w):
            if rng.random() < p:
                all_edges.add((u, w))
    rot = list(rotation) + [()] * k
    emb = Embedding(tuple(rot), tuple(outer_face))
    W = tuple(range(base, n))
    if d is None:
        d = rng.randint(0, n)
    return _finish(
        rng, n, sorted(all_edges), variant, objective, d, 9, {"deletion_vertices": W, "embedding": emb}
    )


def random_embedded_planar(rng: random.Random, n: int, extra: int):
    """Connected planar graph (random tree plus planarity-preserving edges).

    The embedding comes from a planarity test; its largest face becomes the
    outer face, so the graph need not be 2-connected.
    Returns ``(edges, rotation, outer_face)``.
    """
    h = nx.Graph()
    h.add_nodes_from(range(n))
    for v in range(1, n):
        h.add_edge(rng.randrange(v), v)
    pairs = [e for e in itertools.combinations(range(n), 2) if not h.has_edge(*e)]
    rng.shuffle(pairs)
    for u, v in pairs[:extra * 3]:
        if extra <= 0:
            break
        h.add_edge(u, v)
        if nx.check_planarity(h)[0]:
            extra -= 1
        else:
            h.remove_edge(u, v)
    _, emb = nx.check_planarity(h)
    rotation = [tuple(emb.neighbors_cw_order(v)) if h.degree(v) else () for v in range(n)]
    faces = trace_faces_raw(rotation, range(n))
    outer_face = max(faces, key=lambda f: (len(set(f)), -faces.index(f)))
    return sorted(tuple(sorted(e)) for e in h.edges()), rotation, tuple(outer_face)


def random_embedded_instance(rng, n, extra, d=None, objective=MIN, variant=PATH, max_weight=9) -> Instance:
    edges, rotation, outer_face = random_embedded_planar(rng, n, extra)
    if d is None:
        d = rng.randint(0, n)
    emb = Embedding(tuple(rotation), outer_face)
    return _finish(rng, n, edges, variant, objective, d, max_weight, {"embedding": emb})
