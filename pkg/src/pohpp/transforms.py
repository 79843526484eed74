"""Path/cycle reductions, endpoint fixing and traceability size bounds."""
from __future__ import annotations

import enum
import itertools
from functools import lru_cache
from typing import Callable

from .core import CYCLE, MIN, PATH, Graph, Instance, Poset, Solution, TooLarge, bits

TREEDEPTH_MAX_N = 15


def path_to_cycle(inst: Instance) -> Instance:
    """Add a universal vertex that every other vertex must precede."""
    if inst.variant != PATH:
        raise ValueError("path_to_cycle expects a path instance")
    n = inst.n
    g = inst.graph
    u = n
    edges = [(a, b, g.weight(a, b)) if g.weighted else (a, b) for a, b in g.edges()]
    edges += [(v, u, 0) if g.weighted else (v, u) for v in range(n)]
    g2 = Graph.from_edges(n + 1, edges, weighted=g.weighted)
    pred = list(inst.poset.pred) + [(1 << n) - 1]
    succ = [s | (1 << u) for s in inst.poset.succ] + [0]
    cons = tuple(inst.poset.constraints) + tuple((v, u) for v in range(n))
    poset = Poset(n + 1, tuple(pred), tuple(succ), cons)
    return Instance(g2, poset, CYCLE, inst.objective)


def fix_endpoints(p: Poset, s: int | None, t: int | None) -> Poset | None:
    """Force ``s`` first and ``t`` last; None when the order forbids it.

    Either endpoint may be None to fix only one side.
    """
    if s is not None and t is not None and s == t:
        raise ValueError("s and t must differ")
    n = p.n
    full = (1 << n) - 1
    if s is not None and p.pred[s]:
        return None
    if t is not None and p.succ[t]:
        return None
    pred = list(p.pred)
    succ = list(p.succ)
    added = []
    if s is not None:
        succ[s] = full & ~(1 << s)
        for v in range(n):
            if v != s:
                pred[v] |= 1 << s
                added.append((s, v))
    if t is not None:
        pred[t] = full & ~(1 << t)
        for v in range(n):
            if v != t:
                succ[v] |= 1 << t
                added.append((v, t))
    cons = tuple(sorted(set(p.constraints) | set(added)))
    return Poset(n, tuple(pred), tuple(succ), cons)


PathSolver = Callable[[Instance], "Solution | None"]


def cycle_via_path(inst: Instance, path_solver: PathSolver) -> Solution | None:
    """Solve the cycle variant by fixing every adjacent (start, end) pair."""
    if inst.variant != CYCLE:
        raise ValueError("cycle_via_path expects a cycle instance")
    g = inst.graph
    best: Solution | None = None
    for s in range(g.n):
        for t in bits(g.adj[s]):
            p2 = fix_endpoints(inst.poset, s, t)
            if p2 is None:
                continue
            sub = inst.replace(poset=p2, variant=PATH)
            sol = path_solver(sub)
            if sol is None:
                continue
            if inst.objective == MIN:
                total = sol.cost + g.weight(t, s)
                if best is None or total < best.cost:
                    best = Solution(sol.order, total)
            else:
                return Solution(sol.order, 0)
    return best


def _components(adj: list[int], mask: int) -> list[int]:
    comps = []
    rest = mask
    while rest:
        comp = frontier = rest & -rest
        while frontier:
            nxt = 0
            for v in bits(frontier):
                nxt |= adj[v]
            nxt &= mask & ~comp
            comp |= nxt
            frontier = nxt
        comps.append(comp)
        rest &= ~comp
    return comps


def compute_treedepth_exact(g: Graph) -> int:
    if g.n > TREEDEPTH_MAX_N:
        raise TooLarge(f"exact treedepth limited to n <= {TREEDEPTH_MAX_N}")
    adj = list(g.adj)

    @lru_cache(maxsize=None)
    def td(mask: int) -> int:
        if not mask:
            return 0
        comps = _components(adj, mask)
        if len(comps) > 1:
            return max(td(c) for c in comps)
        if mask & (mask - 1) == 0:
            return 1
        return 1 + min(td(mask & ~(1 << v)) for v in bits(mask))

    return td(g.all_mask)


class Verdict(enum.Enum):
    INFEASIBLE = "infeasible"
    UNKNOWN = "unknown"


def check_traceable_bounds(g: Graph, kind: str, k: int) -> Verdict:
    """Quick reject: traceable graphs with small vertex cover / treedepth are small."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    if kind == "vertex-cover":
        limit = 2 * k + 1
    elif kind == "treedepth":
        limit = 2**k - 1
    else:
        raise ValueError(f"unknown parameter kind {kind!r}")
    return Verdict.INFEASIBLE if g.n > limit else Verdict.UNKNOWN


def min_vertex_cover_size(g: Graph) -> int:
    """Brute force, for tests at desk scale."""
    edges = g.edges()
    for size in range(g.n + 1):
        for cover in itertools.combinations(range(g.n), size):
            cs = set(cover)
            if all(u in cs or v in cs for u, v in edges):
                return size
    return g.n
