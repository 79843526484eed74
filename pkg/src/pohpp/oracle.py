"""Exact exponential solvers used as ground truth.

Both solvers return the lexicographically smallest optimal vertex sequence
(for decision instances every feasible sequence is optimal), so their
outputs can be compared verbatim.
"""
from __future__ import annotations


import numpy as np

from . import _kernels
from .core import CYCLE, MIN, Instance, Solution, TooLarge, bits

EXACT_MAX_N = 20
SPARSE_MAX_N = 64
SPARSE_MAX_STATES = 3_000_000
BRUTEFORCE_MAX_N = 10


def _arrays(inst: Instance):
    g = inst.graph
    n = g.n
    adj = np.array(g.adj, dtype=np.int64)
    pred = np.array(inst.poset.pred, dtype=np.int64)
    weight = np.zeros((n, n), dtype=np.int64)
    if inst.objective == MIN:
        for (u, v), w in g.weights.items():
            weight[u, v] = weight[v, u] = w
    return adj, pred, weight


def _walk_back(table, adj, pred, weight, start: int, n: int) -> list[int]:
    order = [start]
    mask = 1 << start
    v = start
    while len(order) < n:
        target = table[mask, v]
        for u in range(n):
            if mask >> u & 1 or not (int(adj[v]) >> u & 1) or int(pred[u]) & ~mask:
                continue
            nxt = table[mask | (1 << u), u]
            if nxt < _kernels.INF and nxt + weight[v, u] == target:
                break
        else:  # pragma: no cover - table is self-consistent
            raise RuntimeError("DP reconstruction failed")
        order.append(u)
        mask |= 1 << u
        v = u
    return order


def solve_exact(inst: Instance) -> Solution | None:
    """Held-Karp style DP over (visited set, last vertex) with precedence."""
    n = inst.n
    if n == 0:
        return None
    if n > EXACT_MAX_N:
        return _solve_sparse(inst)
    adj, pred, weight = _arrays(inst)
    cycle = inst.variant == CYCLE
    best_cost = None
    best_order = None
    if not cycle:
        table = _kernels.completion_table(adj, pred, weight, -1)
        for s in range(n):
            if pred[s]:
                continue
            c = table[1 << s, s]
            if c < _kernels.INF and (best_cost is None or c < best_cost):
                best_cost, best_start = int(c), s
        if best_cost is None:
            return None
        best_order = _walk_back(table, adj, pred, weight, best_start, n)
    else:
        if n < 2:
            return None
        for s in range(n):
            if pred[s]:
                continue
            table = _kernels.completion_table(adj, pred, weight, s)
            c = table[1 << s, s]
            if c < _kernels.INF and (best_cost is None or c < best_cost):
                best_cost = int(c)
                best_order = _walk_back(table, adj, pred, weight, s, n)
        if best_cost is None:
            return None
    return Solution(tuple(best_order), best_cost if inst.objective == MIN else 0)


def _can_finish(adj, succ, rest: int, v: int) -> bool:
    """Necessary conditions for a path from ``v`` through all of ``rest``.

    ``rest`` plus ``v`` must be connected, and at most one vertex of ``rest``
    may have fewer than two neighbours there; that vertex has to come last,
    so nothing in ``rest`` may be required after it.
    """
    if not rest:
        return True
    live = rest | (1 << v)
    seen = 1 << v
    frontier = seen
    while frontier:
        grow = 0
        for w in bits(frontier):
            grow |= adj[w]
        frontier = grow & live & ~seen
        seen |= frontier
    if seen != live:
        return False
    end = -1
    for u in bits(rest):
        d = adj[u] & live
        if d & (d - 1):
            continue
        if end >= 0 or succ[u] & rest:
            return False
        end = u
    return True


def _solve_sparse(inst: Instance) -> Solution | None:
    """Same contract as the dense DP, over reachable states only.

    Used above the dense size limit; instances with tight precedence
    constraints (such as generated gadgets) have few reachable states.
    """
    n = inst.n
    if n > SPARSE_MAX_N:
        raise TooLarge(f"exact DP limited to n <= {SPARSE_MAX_N}, got {n}")
    g = inst.graph
    adj = g.adj
    pred = inst.poset.pred
    succ = inst.poset.succ
    weighted = inst.objective == MIN
    cycle = inst.variant == CYCLE
    full = g.all_mask
    if cycle and n < 2:
        return None
    best: tuple[int, tuple[int, ...]] | None = None
    starts = [s for s in range(n) if not pred[s]]
    for s in starts if cycle else [None]:
        seeds = [s] if cycle else starts
        layers = [{(1 << v, v) for v in seeds}]
        total = len(layers[0])
        for _ in range(n - 1):
            nxt = set()
            for mask, v in layers[-1]:
                for u in bits(adj[v] & ~mask):
                    if not pred[u] & ~mask:
                        m2 = mask | (1 << u)
                        if _can_finish(adj, succ, full & ~m2, u):
                            nxt.add((m2, u))
            total += len(nxt)
            if total > SPARSE_MAX_STATES:
                raise TooLarge(f"more than {SPARSE_MAX_STATES} reachable DP states")
            layers.append(nxt)
        done: dict[tuple[int, int], int] = {}
        for mask, v in layers[-1]:
            if mask != full:
                continue
            if cycle:
                if not g.has_edge(v, s):
                    continue
                done[(mask, v)] = g.weight(v, s) if weighted else 0
            else:
                done[(mask, v)] = 0
        memo = [dict() for _ in layers]
        memo[-1] = done
        for depth in range(n - 2, -1, -1):
            here = memo[depth]
            after = memo[depth + 1]
            for mask, v in layers[depth]:
                val = None
                for u in bits(adj[v] & ~mask):
                    c = after.get((mask | (1 << u), u))
                    if c is None:
                        continue
                    c += g.weight(v, u) if weighted else 0
                    if val is None or c < val:
                        val = c
                if val is not None:
                    here[(mask, v)] = val
        cands = [(memo[0][(1 << v, v)], v) for v in seeds if (1 << v, v) in memo[0]]
        if not cands:
            continue
        cost, v = min(cands)
        order = [v]
        mask = 1 << v
        for depth in range(1, n):
            target = memo[depth - 1][(mask, v)]
            for u in bits(adj[v] & ~mask):
                c = memo[depth].get((mask | (1 << u), u))
                if c is not None and c + (g.weight(v, u) if weighted else 0) == target:
                    break
            order.append(u)
            mask |= 1 << u
            v = u
        key = (cost, tuple(order))
        if best is None or key < best:
            best = key
        if not weighted:
            break
    if best is None:
        return None
    return Solution(best[1], best[0] if weighted else 0)


def solve_bruteforce(inst: Instance) -> Solution | None:
    """Enumerate permutations in lexicographic order; the oracle for the oracle.

    Prefixes that already break adjacency or precedence are cut, which skips
    only permutations that would be rejected anyway.
    """
    n = inst.n
    if n > BRUTEFORCE_MAX_N:
        raise TooLarge(f"brute force limited to n <= {BRUTEFORCE_MAX_N}, got {n}")
    if n == 0:
        return None
    g = inst.graph
    pred = inst.poset.pred
    cycle = inst.variant == CYCLE
    weighted = inst.objective == MIN
    best: list = [None, None]
    order: list[int] = []

    def extend(seen: int, cost: int) -> bool:
        if len(order) == n:
            if cycle:
                if n < 2 or not g.has_edge(order[-1], order[0]):
                    return False
                if weighted:
                    cost += g.weight(order[-1], order[0])
            if best[0] is None or cost < best[0]:
                best[0], best[1] = cost, tuple(order)
            return not weighted
        last = order[-1] if order else None
        for v in range(n):
            if seen >> v & 1 or pred[v] & ~seen:
                continue
            step = 0
            if last is not None:
                if not g.has_edge(last, v):
                    continue
                if weighted:
                    step = g.weight(last, v)
            order.append(v)
            done = extend(seen | (1 << v), cost + step)
            order.pop()
            if done:
                return True
        return False

    extend(0, 0)
    if best[1] is None:
        return None
    return Solution(best[1], best[0] if weighted else 0)
