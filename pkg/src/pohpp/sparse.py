"""Feedback edge set solver: enumerate every simple path once."""
from __future__ import annotations

from typing import Iterator

import numpy as np

from . import _kernels
from .core import CYCLE, MIN, Graph, Instance, Solution, order_cost


def feedback_edge_number(g: Graph) -> int:
    return g.m - g.n + len(g.components())


def enumerate_simple_paths(g: Graph) -> Iterator[tuple[int, ...]]:
    """Yield each simple path with >= 2 vertices once, smaller endpoint first.

    Backtracking from every start vertex; each search node is a simple path,
    emitted only from the end carrying the smaller label.
    """
    adj = g.adj
    for s in range(g.n):
        path = [s]
        stack = [adj[s] & ~(1 << s)]
        seen = 1 << s
        while stack:
            rest = stack[-1]
            if not rest:
                stack.pop()
                seen &= ~(1 << path.pop())
                continue
            low = rest & -rest
            stack[-1] = rest ^ low
            u = low.bit_length() - 1
            path.append(u)
            seen |= low
            if u > s:
                yield tuple(path)
            stack.append(adj[u] & ~seen)


def count_simple_paths(g: Graph) -> int:
    return _kernels.count_simple_paths(np.array(g.adj, dtype=np.int64))


def solve_fes(inst: Instance) -> Solution | None:
    g = inst.graph
    n = g.n
    cycle = inst.variant == CYCLE
    weighted = inst.objective == MIN
    if n == 1:
        return None if cycle else Solution((0,), 0)
    pred = inst.poset.pred
    best_key = None
    best = None
    for path in enumerate_simple_paths(g):
        if len(path) != n:
            continue
        if cycle and not g.has_edge(path[0], path[-1]):
            continue
        for order in (path, path[::-1]):
            seen = 0
            for v in order:
                if pred[v] & ~seen:
                    break
                seen |= 1 << v
            else:
                cost = order_cost(g, order, cycle) if weighted else 0
                key = (cost, order)
                if best_key is None or key < best_key:
                    best_key = key
                    best = Solution(tuple(order), cost)
    return best
