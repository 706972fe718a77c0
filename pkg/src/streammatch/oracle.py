"""Exact maximum-matching oracle.

Hopcroft-Karp with deterministic tie-breaking: adjacency lists are kept
in ascending neighbour order and free vertices are processed in index
order, so repeated calls on the same graph return the same matching.
"""

from __future__ import annotations

from collections import deque

from .graph import BipartiteGraph, Matching

_INF = -1  # layer value for "unreached"


def maximum_matching(g: BipartiteGraph) -> Matching:
    """Return a maximum matching of g."""
    match_a, match_b = _hopcroft_karp(g.n_a, g.n_b, _sorted_adjacency(g))
    return Matching((a, b) for a, b in enumerate(match_a) if b >= 0)


def maximum_matching_size(g: BipartiteGraph) -> int:
    match_a, _ = _hopcroft_karp(g.n_a, g.n_b, _sorted_adjacency(g))
    return sum(1 for b in match_a if b >= 0)


def _sorted_adjacency(g: BipartiteGraph) -> list[list[int]]:
    adj: list[list[int]] = [[] for _ in range(g.n_a)]
    ea, eb = g.edge_arrays()
    for a, b in zip(ea.tolist(), eb.tolist()):
        adj[a].append(b)
    for neighbours in adj:
        neighbours.sort()
    return adj


def _hopcroft_karp(n_a: int, n_b: int, adj: list[list[int]]) -> tuple[list[int], list[int]]:
    match_a = [-1] * n_a
    match_b = [-1] * n_b

    def bfs_layers() -> tuple[list[int], bool]:
        layer = [_INF] * n_a
        queue: deque[int] = deque()
        for a in range(n_a):
            if match_a[a] < 0:
                layer[a] = 0
                queue.append(a)
        found_free_b = False
        while queue:
            a = queue.popleft()
            for b in adj[a]:
                a2 = match_b[b]
                if a2 < 0:
                    found_free_b = True
                elif layer[a2] == _INF:
                    layer[a2] = layer[a] + 1
                    queue.append(a2)
        return layer, found_free_b

    def dfs_augment(root: int, layer: list[int], nxt: list[int]) -> bool:
        # iterative alternating DFS constrained to consecutive layers
        stack = [root]
        trail: list[tuple[int, int]] = []
        while stack:
            a = stack[-1]
            advanced = False
            while nxt[a] < len(adj[a]):
                b = adj[a][nxt[a]]
                nxt[a] += 1
                a2 = match_b[b]
                if a2 < 0:
                    trail.append((a, b))
                    for ta, tb in trail:
                        match_a[ta] = tb
                        match_b[tb] = ta
                    return True
                if layer[a2] == layer[a] + 1:
                    trail.append((a, b))
                    stack.append(a2)
                    advanced = True
                    break
            if not advanced:
                layer[a] = _INF  # dead end; never revisit this phase
                stack.pop()
                if trail and stack:
                    trail.pop()
        return False

    while True:
        layer, reachable = bfs_layers()
        if not reachable:
            break
        nxt = [0] * n_a
        progressed = 0
        for a in range(n_a):
            if match_a[a] < 0 and layer[a] == 0:
                if dfs_augment(a, layer, nxt):
                    progressed += 1
        if progressed == 0:
            break
    return match_a, match_b
