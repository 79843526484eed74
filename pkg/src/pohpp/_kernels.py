"""Hot inner loops with a numba path and a pure-numpy path.

Set ``POHPP_DISABLE_NUMBA=1`` to force the numpy implementations (also used
when numba is not importable). Both paths return identical arrays.
"""
from __future__ import annotations

import os

import numpy as np

INF = np.int64(1) << np.int64(62)

_DISABLED = os.environ.get("POHPP_DISABLE_NUMBA", "").strip().lower() not in ("", "0", "false", "no")

try:
    if _DISABLED:
        raise ImportError("disabled by POHPP_DISABLE_NUMBA")
    from numba import njit

    HAS_NUMBA = True
except ImportError:
    HAS_NUMBA = False


def completion_table_numpy(adj: np.ndarray, pred: np.ndarray, weight: np.ndarray, close_to: int) -> np.ndarray:
    """Backward DP over (visited, last).

    ``table[mask, v]`` is the minimum cost of visiting every vertex outside
    ``mask`` starting from ``v`` (with ``v`` in ``mask``), honoring the
    predecessor masks. With ``close_to >= 0`` the walk must return to that
    vertex and pays the closing edge. Unreachable entries hold ``INF``.
    """
    n = adj.shape[0]
    full = (1 << n) - 1
    table = np.full((1 << n, n), INF, dtype=np.int64)
    masks_all = np.arange(1 << n, dtype=np.int64)
    for v in range(n):
        if close_to < 0:
            table[full, v] = 0
        elif (adj[v] >> close_to) & 1:
            table[full, v] = weight[v, close_to]
    popc = np.zeros(1 << n, dtype=np.int64)
    for b in range(n):
        popc += (masks_all >> b) & 1
    for size in range(n - 1, 0, -1):
        layer = masks_all[popc == size]
        for v in range(n):
            lay_v = layer[((layer >> v) & 1) == 1]
            if lay_v.size == 0:
                continue
            best = np.full(lay_v.size, INF, dtype=np.int64)
            for u in range(n):
                if u == v or not ((adj[v] >> u) & 1):
                    continue
                ok = (((lay_v >> u) & 1) == 0) & ((pred[u] & ~lay_v) == 0)
                if not ok.any():
                    continue
                nxt = table[lay_v | (np.int64(1) << u), u]
                cand = np.where(ok & (nxt < INF), nxt + weight[v, u], INF)
                np.minimum(best, cand, out=best)
            table[lay_v, v] = best
    return table


def count_simple_paths_py(adj: np.ndarray) -> int:
    """Number of simple paths with at least two vertices, up to reversal."""
    n = adj.shape[0]
    adj_l = [int(a) for a in adj]
    total = 0
    stack = []
    for s in range(n):
        stack.append((s, 1 << s))
        while stack:
            v, seen = stack.pop()
            if v > s:
                total += 1
            rest = adj_l[v] & ~seen
            while rest:
                low = rest & -rest
                u = low.bit_length() - 1
                stack.append((u, seen | low))
                rest ^= low
    return total


if HAS_NUMBA:

    @njit(cache=True)
    def _completion_table_jit(adj, pred, weight, close_to):
        n = adj.shape[0]
        full = (1 << n) - 1
        table = np.full((1 << n, n), INF, dtype=np.int64)
        for v in range(n):
            if close_to < 0:
                table[full, v] = 0
            elif (adj[v] >> close_to) & 1:
                table[full, v] = weight[v, close_to]
        for mask in range(full - 1, 0, -1):
            for v in range(n):
                if not ((mask >> v) & 1):
                    continue
                best = INF
                cand_set = adj[v] & ~mask
                for u in range(n):
                    if not ((cand_set >> u) & 1):
                        continue
                    if pred[u] & ~mask:
                        continue
                    nxt = table[mask | (1 << u), u]
                    if nxt >= INF:
                        continue
                    c = nxt + weight[v, u]
                    if c < best:
                        best = c
                table[mask, v] = best
        return table

    @njit(cache=True)
    def _count_simple_paths_jit(adj):
        n = adj.shape[0]
        total = 0
        path = np.zeros(n, dtype=np.int64)
        cand = np.zeros(n, dtype=np.int64)
        for s in range(n):
            depth = 0
            path[0] = s
            seen = np.int64(1) << s
            cand[0] = adj[s] & ~seen
            while depth >= 0:
                rest = cand[depth]
                if rest == 0:
                    seen &= ~(np.int64(1) << path[depth])
                    depth -= 1
                    continue
                u = 0
                while not ((rest >> u) & 1):
                    u += 1
                cand[depth] = rest & ~(np.int64(1) << u)
                depth += 1
                path[depth] = u
                seen |= np.int64(1) << u
                cand[depth] = adj[u] & ~seen
                if u > s:
                    total += 1
        return total


def completion_table(adj, pred, weight, close_to: int = -1) -> np.ndarray:
    adj = np.asarray(adj, dtype=np.int64)
    pred = np.asarray(pred, dtype=np.int64)
    weight = np.asarray(weight, dtype=np.int64)
    if HAS_NUMBA:
        return _completion_table_jit(adj, pred, weight, np.int64(close_to))
    return completion_table_numpy(adj, pred, weight, close_to)


def count_simple_paths(adj) -> int:
    adj = np.asarray(adj, dtype=np.int64)
    if HAS_NUMBA and adj.shape[0] <= 62:
        return int(_count_simple_paths_jit(adj))
    return count_simple_paths_py(adj)
