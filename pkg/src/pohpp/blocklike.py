"""Block-cut trees and the block-graph family of solvers.

All solvers here answer the decision question; weights are ignored.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import networkx as nx

from .core import (
    CYCLE,
    Graph,
    Instance,
    InvalidCertificate,
    NotBlockGraph,
    Poset,
    Solution,
    bits,
    to_mask,
)
from .transforms import cycle_via_path

FREE = -1
JUMP = -2


@dataclass(frozen=True)
class BlockCutTree:
    blocks: tuple[frozenset, ...]
    cut_vertices: frozenset
    blocks_of: tuple[tuple[int, ...], ...]
    block_masks: tuple[int, ...] = field(repr=False, default=())

    def node_of(self, v: int):
        """Tree node for vertex ``v``: ("cut", v) or ("block", index)."""
        if v in self.cut_vertices:
            return ("cut", v)
        return ("block", self.blocks_of[v][0])

    def tree_adjacency(self) -> dict:
        adj: dict = {("block", i): [] for i in range(len(self.blocks))}
        for c in sorted(self.cut_vertices):
            adj[("cut", c)] = [("block", b) for b in self.blocks_of[c]]
            for b in self.blocks_of[c]:
                adj[("block", b)].append(("cut", c))
        return adj

    def tree_path(self, x: int, y: int) -> list | None:
        """Node path between the nodes of ``x`` and ``y``; None if disconnected."""
        src, dst = self.node_of(x), self.node_of(y)
        if src == dst:
            return [src]
        adj = self.tree_adjacency()
        parent = {src: None}
        queue = [src]
        for node in queue:
            if node == dst:
                break
            for nb in adj[node]:
                if nb not in parent:
                    parent[nb] = node
                    queue.append(nb)
        if dst not in parent:
            return None
        path = [dst]
        while parent[path[-1]] is not None:
            path.append(parent[path[-1]])
        return path[::-1]


def block_cut_tree(g: Graph, mask: int | None = None) -> BlockCutTree:
    """Biconnected decomposition of the subgraph induced by ``mask``.

    Blocks are ordered by their smallest vertex, then lexicographically.
    Isolated vertices form single-vertex blocks.
    """
    if mask is None:
        mask = g.all_mask
    nxg = nx.Graph()
    verts = list(bits(mask))
    nxg.add_nodes_from(verts)
    for u in verts:
        for v in bits(g.adj[u] & mask):
            if u < v:
                nxg.add_edge(u, v)
    raw = [frozenset(b) for b in nx.biconnected_components(nxg)]
    covered = set().union(*raw) if raw else set()
    raw += [frozenset([v]) for v in verts if v not in covered]
    raw.sort(key=lambda b: sorted(b))
    blocks_of: list[list[int]] = [[] for _ in range(g.n)]
    for i, b in enumerate(raw):
        for v in b:
            blocks_of[v].append(i)
    cuts = frozenset(v for v in verts if len(blocks_of[v]) >= 2)
    return BlockCutTree(tuple(raw), cuts, tuple(tuple(b) for b in blocks_of), tuple(to_mask(b) for b in raw))


def is_block_graph(g: Graph, mask: int | None = None) -> bool:
    tree = block_cut_tree(g, mask)
    return all(g.is_clique(m) for m in tree.block_masks)


# ------------------------------------------------------------ block graphs


def _block_sequence(g: Graph, tree: BlockCutTree, mask: int) -> list[int] | None:
    """Group sequence (as bitmasks) for a block-cut tree that is a path.

    Returns the alternating list group_1, cut_1, group_2, ... where each group
    holds the non-cut vertices of one block, or None if the tree is not a path.
    """
    nb = len(tree.blocks)
    if nb == 1:
        return [tree.block_masks[0]]
    if any(len(tree.blocks_of[c]) != 2 for c in tree.cut_vertices):
        return None
    cuts_in = [[c for c in tree.blocks[i] if c in tree.cut_vertices] for i in range(nb)]
    if any(len(cs) > 2 or len(cs) == 0 for cs in cuts_in):
        return None
    ends = [i for i in range(nb) if len(cuts_in[i]) == 1]
    if len(ends) != 2:
        return None
    start = min(ends, key=lambda i: min(tree.blocks[i]))
    seq: list[int] = []
    prev_cut = None
    cur = start
    visited = set()
    while True:
        visited.add(cur)
        nxt_cut = [c for c in cuts_in[cur] if c != prev_cut]
        group = tree.block_masks[cur] & ~to_mask(cuts_in[cur])
        seq.append(group)
        if not nxt_cut:
            break
        c = nxt_cut[0]
        seq.append(1 << c)
        prev_cut = c
        cur = [b for b in tree.blocks_of[c] if b != cur][0]
        if cur in visited:
            return None
    if len(visited) != nb:
        return None
    return seq


def _order_groups(poset: Poset, groups: list[int]) -> list[int] | None:
    """Concatenate groups, each in topological order; None if π disagrees."""
    order: list[int] = []
    seen = 0
    for grp in groups:
        rest = grp
        while rest:
            for v in bits(rest):
                if poset.pred[v] & ~seen == 0:
                    break
            else:
                return None
            order.append(v)
            seen |= 1 << v
            rest &= ~(1 << v)
    return order


def solve_block_graph(inst: Instance) -> Solution | None:
    """Decision solver for block graphs."""
    g = inst.graph
    n = g.n
    tree = block_cut_tree(g)
    if not all(g.is_clique(m) for m in tree.block_masks):
        raise NotBlockGraph("graph has a block that is not a clique")
    if inst.variant == CYCLE:
        if n < 2 or len(tree.blocks) != 1:
            return None
        order = inst.poset.restrict_order(g.all_mask)
        return Solution(tuple(order), 0)
    if n == 0:
        return None
    seq = _block_sequence(g, tree, g.all_mask)
    if seq is None:
        return None
    for groups in (seq, seq[::-1]):
        order = _order_groups(inst.poset, groups)
        if order is not None:
            return Solution(tuple(order), 0)
    return None


# --------------------------------------------------------------- edge choices


@dataclass(frozen=True)
class EdgeChoice:
    """Start vertex plus an ordered list of directed deletion edges used.

    ``end`` optionally pins the last vertex of the path; when None every
    admissible end vertex is tried.
    """

    start: int
    ordered_edges: tuple[tuple[int, int], ...] = ()
    end: int | None = None


@dataclass
class _Plan:
    """A guessed skeleton of the path.

    The path is ``lead``, ``start``, segment, jump, segment, ..., ``end``,
    ``trail``. ``jumps[i]`` is (s, interior, t): a forced walk from ``s`` to
    ``t`` through ``interior`` (vertices outside the block graph part, or
    deletion-edge chain vertices).
    """

    start: int
    jumps: list[tuple[int, tuple[int, ...], int]]
    end: int | None
    lead: tuple[int, ...] = ()
    trail: tuple[int, ...] = ()


class _Walker:
    """Greedy filling of segments between anchors over a fixed block graph."""

    def __init__(self, g: Graph, H: Graph, host_mask: int, poset: Poset):
        self.g = g
        self.H = H
        self.host = host_mask
        self.poset = poset
        self.tree = block_cut_tree(H, host_mask)
        self.stats = {"plans": 0}
        self._proj_cache: dict = {}
        # segment label per vertex for the last accepted plan
        self.labels: list[int] | None = None

    def projection(self, x: int, y: int):
        """List of (block mask, exit vertex) from ``x`` to ``y``; None if apart."""
        key = (x, y)
        if key in self._proj_cache:
            return self._proj_cache[key]
        res = None
        if x == y:
            res = []
        else:
            path = self.tree.tree_path(x, y)
            if path is not None:
                res = []
                blocks = [nd for nd in path if nd[0] == "block"]
                cuts = [nd[1] for nd in path if nd[0] == "cut"]
                # exits: cut vertices following each block, then y
                exits = []
                for i, nd in enumerate(path):
                    if nd[0] != "block":
                        continue
                    if i + 1 < len(path):
                        exits.append(path[i + 1][1])
                    else:
                        exits.append(y)
                for nd, ex in zip(blocks, exits):
                    res.append((self.tree.block_masks[nd[1]], ex))
                res = (res, [c for c in cuts if c not in (x, y)])
        self._proj_cache[key] = res
        return res

    def run(self, plan: _Plan) -> list[int] | None:
        self.stats["plans"] += 1
        n = self.g.n
        pred = self.poset.pred
        # anchors and segments
        segs = []
        cur = plan.start
        for s, interior, t in plan.jumps:
            segs.append((cur, s))
            cur = t
        if plan.end is None:
            return None
        segs.append((cur, plan.end))
        label = [FREE] * n
        for v in range(n):
            if not (self.host >> v & 1):
                label[v] = JUMP
        for s, interior, t in plan.jumps:
            for v in interior:
                if self.host >> v & 1:
                    label[v] = JUMP
        projections = []
        for idx, (x, y) in enumerate(segs):
            proj = self.projection(x, y)
            if proj is None:
                return None
            if x == y:
                blocks, inner_cuts = [], []
            else:
                blocks, inner_cuts = proj
            projections.append(blocks)
            for v in (x, y, *inner_cuts):
                if label[v] == FREE:
                    label[v] = idx
                elif label[v] != idx:
                    return None
        order: list[int] = []
        seen = 0

        def visit(v: int) -> bool:
            nonlocal seen
            if seen >> v & 1 or pred[v] & ~seen:
                return False
            order.append(v)
            seen |= 1 << v
            return True

        for v in plan.lead:
            if not visit(v):
                return None
        for idx, (x, y) in enumerate(segs):
            if idx == 0:
                if not visit(x):
                    return None
            else:
                s, interior, t = plan.jumps[idx - 1]
                for v in interior:
                    if not visit(v):
                        return None
                if not visit(t):
                    return None
            for bmask, exit_v in projections[idx]:
                free = 0
                for v in bits(bmask & ~seen):
                    if label[v] == FREE:
                        free |= 1 << v
                while True:
                    for v in bits(free):
                        if pred[v] & ~seen == 0:
                            break
                    else:
                        break
                    visit(v)
                    free &= ~(1 << v)
                if not visit(exit_v):
                    return None
        for v in plan.trail:
            if not visit(v):
                return None
        if len(order) != n:
            return None
        self.labels = label
        return order


def _check_block_host(g: Graph, host: int) -> None:
    if not is_block_graph(g, host):
        raise NotBlockGraph("graph minus the deletion set is not a block graph")


def _anchor_order_ok(poset: Poset, seq: Sequence[int]) -> bool:
    seen = 0
    for v in seq:
        if seen >> v & 1:
            return False
        seen |= 1 << v
    # no later element may be forced before an earlier one
    later = 0
    for v in reversed(seq):
        if poset.pred[v] & later:
            return False
        later |= 1 << v
    return True


def normalize_edge_choice(choice: EdgeChoice) -> tuple[list[tuple[int, tuple[int, ...], int]], int]:
    """Merge chains of consecutive edges sharing endpoints into jumps.

    Returns (jumps, start); a jump is (tail, interior vertices, head).
    """
    jumps: list[tuple[int, tuple[int, ...], int]] = []
    for a, b in choice.ordered_edges:
        if jumps and jumps[-1][2] == a:
            s, interior, t = jumps[-1]
            jumps[-1] = (s, interior + (t,), b)
        else:
            jumps.append((a, (), b))
    return jumps, choice.start


def validate_edge_choice(inst: Instance, F: Sequence[tuple[int, int]], choice: EdgeChoice) -> Solution | None:
    """Check one edge choice; returns a full path or None."""
    g = inst.graph
    H = g.without_edges(F)
    _check_block_host(H, g.all_mask)
    walker = _Walker(g, H, g.all_mask, inst.poset)
    for order in _edge_choice_orders(walker, inst.poset, choice):
        return Solution(tuple(order), 0)
    return None


def _edge_choice_orders(walker: _Walker, poset: Poset, choice: EdgeChoice) -> Iterator[list[int]]:
    jumps, start = normalize_edge_choice(choice)
    anchors = [start]
    for s, interior, t in jumps:
        anchors.extend([s, *interior, t])
    # u0 may coincide with the first jump's tail
    seq = anchors[1:] if len(anchors) > 1 and anchors[0] == anchors[1] else anchors
    if not _anchor_order_ok(poset, seq):
        return
    last = jumps[-1][2] if jumps else start
    if choice.end is not None:
        ends = [choice.end]
    else:
        used = to_mask(seq)
        ends = [last] + [v for v in range(walker.g.n) if not (used >> v & 1) and poset.succ[v] == 0]
    for e in ends:
        if e != last and not _anchor_order_ok(poset, seq + [e]):
            continue
        order = walker.run(_Plan(start, jumps, e))
        if order is not None:
            yield order


def iter_edge_choices(n: int, F: Sequence[tuple[int, int]], poset: Poset | None = None) -> Iterator[EdgeChoice]:
    """All (start, ordered directed subset of F) choices.

    With a poset, starts that have predecessors are skipped.
    """
    F = list(F)
    k = len(F)
    starts = [v for v in range(n) if poset is None or poset.pred[v] == 0]
    for size in range(k + 1):
        for subset in itertools.permutations(F, size):
            for dirs in itertools.product((0, 1), repeat=size):
                edges = tuple((e[1], e[0]) if d else tuple(e) for e, d in zip(subset, dirs))
                for u0 in starts:
                    yield EdgeChoice(u0, edges)


def edge_choice_count(n: int, k: int) -> int:
    """Number of edge choices enumerated for ``n`` vertices and ``|F| = k``."""
    return n * sum(math.perm(k, j) * 2**j for j in range(k + 1))


def solve_edge_distance_block(inst: Instance, F: Sequence[tuple[int, int]] | None = None) -> Solution | None:
    if F is None:
        F = inst.deletion_edges
        if F is None:
            raise InvalidCertificate("no deletion edge set given")
    F = [tuple(sorted(e)) for e in F]
    g = inst.graph
    for u, v in F:
        if not g.has_edge(u, v):
            raise InvalidCertificate(f"({u},{v}) is not an edge")
    H = g.without_edges(F)
    _check_block_host(H, g.all_mask)
    if inst.variant == CYCLE:
        return cycle_via_path(inst, lambda sub: solve_edge_distance_block(sub, F))
    if g.n == 0:
        return None
    walker = _Walker(g, H, g.all_mask, inst.poset)
    for choice in iter_edge_choices(g.n, F, inst.poset):
        if not _edges_plausible(choice):
            continue
        for order in _edge_choice_orders(walker, inst.poset, choice):
            return Solution(tuple(order), 0)
    return None


def _edges_plausible(choice: EdgeChoice) -> bool:
    """At most two chosen edges per vertex, and those must be consecutive."""
    count: dict[int, list[int]] = {}
    for i, (a, b) in enumerate(choice.ordered_edges):
        count.setdefault(a, []).append(i)
        count.setdefault(b, []).append(i)
    for v, idx in count.items():
        if len(idx) > 2:
            return False
        if len(idx) == 2:
            i, j = idx
            if j != i + 1:
                return False
            if choice.ordered_edges[i][1] != v or choice.ordered_edges[j][0] != v:
                return False
    if choice.ordered_edges and choice.start in count:
        # the start may only touch the first edge, as its tail
        first = choice.ordered_edges[0]
        if choice.start != first[0] or len(count[choice.start]) != 1:
            return False
    return True


# ------------------------------------------------------------ vertex choices


@dataclass(frozen=True)
class VertexChoice:
    """Ordering of W with, per maximal run of consecutive W vertices, the
    neighbor entered from and left to (None marks the path start/end)."""

    order: tuple[int, ...]
    runs: tuple[tuple[int, ...], ...]
    pred: tuple[int | None, ...]
    succ: tuple[int | None, ...]


def _compositions(seq: tuple[int, ...]) -> Iterator[tuple[tuple[int, ...], ...]]:
    k = len(seq)
    for cuts in itertools.product((0, 1), repeat=max(k - 1, 0)):
        runs = []
        cur = [seq[0]]
        for i, c in enumerate(cuts):
            if c:
                runs.append(tuple(cur))
                cur = [seq[i + 1]]
            else:
                cur.append(seq[i + 1])
        runs.append(tuple(cur))
        yield tuple(runs)


def iter_vertex_choices(g: Graph, W: Sequence[int], poset: Poset) -> Iterator[VertexChoice]:
    Wm = to_mask(W)
    host = g.all_mask & ~Wm
    for order in itertools.permutations(sorted(W)):
        if not _respects(poset, order):
            continue
        for runs in _compositions(order):
            if any(not g.has_edge(a, b) for r in runs for a, b in zip(r, r[1:])):
                continue
            last = len(runs) - 1
            pred_opts = []
            succ_opts = []
            for i, r in enumerate(runs):
                p = [v for v in bits(g.adj[r[0]] & host)]
                s = [v for v in bits(g.adj[r[-1]] & host)]
                if i == 0:
                    p = [None] + p
                if i == last:
                    s = s + [None]
                pred_opts.append(p)
                succ_opts.append(s)
            for preds in itertools.product(*pred_opts):
                for succs in itertools.product(*succ_opts):
                    yield VertexChoice(order, runs, preds, succs)


def _respects(poset: Poset, seq: Sequence[int]) -> bool:
    later = 0
    for v in reversed(seq):
        if poset.pred[v] & later:
            return False
        later |= 1 << v
    return True


def solve_distance_block(inst: Instance, W: Sequence[int] | None = None) -> Solution | None:
    if W is None:
        W = inst.deletion_vertices
        if W is None:
            raise InvalidCertificate("no deletion vertex set given")
    W = sorted(set(W))
    g = inst.graph
    if any(not 0 <= w < g.n for w in W):
        raise InvalidCertificate("deletion vertex out of range")
    host = g.all_mask & ~to_mask(W)
    _check_block_host(g, host)
    if inst.variant == CYCLE:
        return cycle_via_path(inst, lambda sub: solve_distance_block(sub, W))
    if g.n == 0:
        return None
    if not W:
        return solve_block_graph(inst)
    poset = inst.poset
    if host == 0:
        for order in itertools.permutations(W):
            if poset.is_linear_extension(order) and all(
                g.has_edge(a, b) for a, b in zip(order, order[1:])
            ):
                return Solution(tuple(order), 0)
        return None
    H = g  # edges between host vertices are those of G - W
    walker = _Walker(g, H, host, poset)
    host_ids = list(bits(host))
    for ch in iter_vertex_choices(g, W, poset):
        lead: tuple[int, ...] = ()
        trail: tuple[int, ...] = ()
        jumps = []
        start = None
        end = None
        ok = True
        for i, r in enumerate(ch.runs):
            p, s = ch.pred[i], ch.succ[i]
            if p is None and s is None:
                ok = False  # the whole path would be inside W
                break
            if p is None:
                lead = r
                start = s
            elif s is None:
                trail = r
                end = p
            else:
                jumps.append((p, r, s))
        if not ok:
            continue
        seq = list(lead)
        if start is not None:
            seq.append(start)
        for p, r, s in jumps:
            if seq and seq[-1] == p:
                seq.extend([*r, s])
            else:
                seq.extend([p, *r, s])
        if end is not None:
            if not seq or seq[-1] != end:
                seq.append(end)
            seq.extend(trail)
        if not _anchor_order_ok(poset, seq):
            continue
        starts = [start] if start is not None else [
            v for v in host_ids if poset.pred[v] == 0
        ]
        for u0 in starts:
            last = jumps[-1][2] if jumps else u0
            if end is not None:
                ends = [end]
            else:
                used = to_mask(seq) | (1 << u0)
                ends = [last] + [v for v in host_ids if not (used >> v & 1) and poset.succ[v] == 0]
            for e in ends:
                order = walker.run(_Plan(u0, jumps, e, lead, trail))
                if order is not None:
                    return Solution(tuple(order), 0)
    return None


def find_block_deletion_set(g: Graph, k: int) -> list[int] | None:
    for size in range(k + 1):
        for W in itertools.combinations(range(g.n), size):
            if is_block_graph(g, g.all_mask & ~to_mask(W)):
                return list(W)
    return None


def find_block_deletion_edges(g: Graph, k: int) -> list[tuple[int, int]] | None:
    """Smallest, then lexicographically first, F with G - F a block graph."""
    edges = list(g.edges())
    for size in range(min(k, len(edges)) + 1):
        for F in itertools.combinations(edges, size):
            if is_block_graph(g.without_edges(F)):
                return list(F)
    return None
