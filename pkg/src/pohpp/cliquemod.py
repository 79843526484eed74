"""POHPP when all but a few vertices form a clique module.

A clique module C is a clique whose members all see the same vertices
outside C. For every ordering of the remaining vertices W, the clique
vertices only have to be distributed over the gaps between consecutive
W-vertices; the window of gaps allowed for a clique vertex follows from its
precedence relations to W.
"""
from __future__ import annotations

import itertools
from typing import Sequence

import numpy as np

from .core import CYCLE, Graph, Instance, InvalidCertificate, Poset, Solution, bits, to_mask
from .transforms import cycle_via_path


def find_clique_module_set(g: Graph) -> tuple[list[int], list[int]]:
    """Largest class of equal closed neighbourhoods as C, the rest as W."""
    classes: dict[int, list[int]] = {}
    for v in range(g.n):
        classes.setdefault(g.adj[v] | (1 << v), []).append(v)
    C = min(classes.values(), key=lambda c: (-len(c), c)) if classes else []
    Cm = to_mask(C)
    return [v for v in range(g.n) if not (Cm >> v & 1)], C


def is_clique_module(g: Graph, C: Sequence[int]) -> bool:
    Cm = to_mask(C)
    if not C or not g.is_clique(Cm):
        return bool(not C)
    outside = g.adj[C[0]] & ~Cm
    return all(g.adj[c] & ~Cm == outside for c in C)


def lr_profile(poset: Poset, frontier: Sequence[int], C: Sequence[int]) -> tuple[np.ndarray, np.ndarray]:
    """ℓ and r for clique vertices against a frontier sequence w_1..w_k.

    ℓ(x) is the largest i with w_i before x (0 if none), r(x) the smallest i
    with x before w_i (k+1 if none).
    """
    k = len(frontier)
    lo = np.zeros(len(C), dtype=np.int64)
    hi = np.full(len(C), k + 1, dtype=np.int64)
    for j, x in enumerate(C):
        for i, w in enumerate(frontier, start=1):
            if poset.pred[x] >> w & 1:
                lo[j] = i
            if poset.succ[x] >> w & 1 and hi[j] == k + 1:
                hi[j] = i
    if np.any(lo >= hi):
        raise RuntimeError("frontier order contradicts the precedence order")
    return lo, hi


def lr_buckets(lo: np.ndarray, hi: np.ndarray, C: Sequence[int], topo_rank: Sequence[int]) -> dict:
    """Group clique vertices by (ℓ, r), each group in precedence order."""
    out: dict = {}
    for j, x in enumerate(C):
        out.setdefault((int(lo[j]), int(hi[j])), []).append(x)
    for key in out:
        out[key].sort(key=lambda x: topo_rank[x])
    return out


def _respects(poset: Poset, seq: Sequence[int]) -> bool:
    later = 0
    for v in reversed(seq):
        if poset.pred[v] & later:
            return False
        later |= 1 << v
    return True


class _Context:
    def __init__(self, inst: Instance, W: list[int], C: list[int]):
        g = inst.graph
        p = inst.poset
        self.g, self.poset, self.W, self.C = g, p, W, C
        Cm = to_mask(C)
        self.frontier_mask = g.adj[C[0]] & ~Cm if C else 0
        topo = p.restrict_order(g.all_mask)
        self.rank = [0] * g.n
        for i, v in enumerate(topo):
            self.rank[v] = i
        self.C_sorted = sorted(C, key=lambda x: self.rank[x])
        widx = {w: i for i, w in enumerate(W)}
        self.before = np.zeros((len(C), len(W)), dtype=bool)
        self.after = np.zeros((len(C), len(W)), dtype=bool)
        for j, x in enumerate(self.C_sorted):
            for w in bits(p.pred[x] & to_mask(W)):
                self.before[j, widx[w]] = True
            for w in bits(p.succ[x] & to_mask(W)):
                self.after[j, widx[w]] = True
        self.widx = widx

    def attempt(self, rho: tuple[int, ...]) -> list[int] | None:
        g = self.g
        fm = self.frontier_mask
        frontier = [w for w in rho if fm >> w & 1]
        K = len(frontier)
        if K == 0:
            return None
        # runs of secluded vertices: before the first frontier, after frontier i
        runs: list[list[int]] = [[] for _ in range(K + 1)]
        slot = 0
        for w in rho:
            if fm >> w & 1:
                slot += 1
            else:
                runs[slot].append(w)
        # secluded runs must be glued to their frontier neighbours by edges
        for i in range(K + 1):
            seg = runs[i]
            if not seg:
                continue
            left = frontier[i - 1] if i > 0 else None
            right = frontier[i] if i < K else None
            seq = ([left] if left is not None else []) + seg + ([right] if right is not None else [])
            if any(not g.has_edge(a, b) for a, b in zip(seq, seq[1:])):
                return None
        open_gap = np.array([not runs[i] for i in range(K + 1)], dtype=bool)
        required = [
            i for i in range(1, K) if open_gap[i] and not g.has_edge(frontier[i - 1], frontier[i])
        ]
        # index contributions of every W-vertex for the windows
        lidx = np.zeros(len(self.W), dtype=np.int64)
        ridx = np.zeros(len(self.W), dtype=np.int64)
        for i, f in enumerate(frontier, start=1):
            lidx[self.widx[f]] = i
            ridx[self.widx[f]] = i
        for i in range(K + 1):
            for s in runs[i]:
                lidx[self.widx[s]] = i + 1
                ridx[self.widx[s]] = i
        lo = np.where(self.before, lidx[None, :], 0).max(axis=1, initial=0)
        hi = np.where(self.after, ridx[None, :], K + 1).min(axis=1, initial=K + 1)
        # latest open gap strictly below each hi value
        latest_below = np.full(K + 2, -1, dtype=np.int64)
        last_open = -1
        for h in range(K + 2):
            latest_below[h] = last_open
            if h <= K and open_gap[h]:
                last_open = h
        late = latest_below[hi]
        if np.any(late < lo):
            return None
        gap = late.copy()
        used = np.zeros(len(self.C), dtype=bool)
        for r in required:
            cand = np.flatnonzero(~used & (lo <= r) & (late >= r))
            if cand.size == 0:
                return None
            # smallest latest slot, then earliest in precedence order
            pick = cand[np.lexsort((cand, late[cand]))[0]]
            used[pick] = True
            gap[pick] = r
        order: list[int] = list(runs[0])
        buckets: list[list[int]] = [[] for _ in range(K + 1)]
        for j, x in enumerate(self.C_sorted):
            buckets[int(gap[j])].append(x)
        for i in range(K + 1):
            if i > 0:
                order.append(frontier[i - 1])
                order.extend(runs[i])
            order.extend(buckets[i])
        return order


def solve_clique_module(inst: Instance, W: Sequence[int] | None = None) -> Solution | None:
    """Decision solver; ``W`` defaults to the certificate or the computed set."""
    g = inst.graph
    if W is None:
        W = inst.deletion_vertices
    if W is None:
        W, _ = find_clique_module_set(g)
    W = sorted(set(W))
    if any(not 0 <= w < g.n for w in W):
        raise InvalidCertificate("deletion vertex out of range")
    Wm = to_mask(W)
    C = [v for v in range(g.n) if not (Wm >> v & 1)]
    if not is_clique_module(g, C):
        raise InvalidCertificate("V minus W is not a clique module")
    if inst.variant == CYCLE:
        return cycle_via_path(inst, lambda sub: solve_clique_module(sub, W))
    if g.n == 0:
        return None
    poset = inst.poset
    if not W:
        return Solution(tuple(poset.restrict_order(g.all_mask)), 0)
    if not C:
        for rho in itertools.permutations(W):
            if _respects(poset, rho) and all(g.has_edge(a, b) for a, b in zip(rho, rho[1:])):
                return Solution(rho, 0)
        return None
    ctx = _Context(inst, W, C)
    for rho in itertools.permutations(W):
        if not _respects(poset, rho):
            continue
        order = ctx.attempt(rho)
        if order is not None:
            return Solution(tuple(order), 0)
    return None
