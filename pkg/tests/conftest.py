"""Shared test helpers: brute-force oracles and random-instance builders."""

from __future__ import annotations

from functools import lru_cache

import numpy as np
import pytest
from hypothesis import strategies as st

from streammatch.graph import BipartiteGraph


def brute_force_mu(g: BipartiteGraph) -> int:
    """Maximum matching size by bitmask DP; needs n_b <= 16."""
    assert g.n_b <= 16, "brute force oracle is exponential in n_b"
    adj: list[tuple[int, ...]] = [() for _ in range(g.n_a)]
    grouped: dict[int, list[int]] = {}
    for a, b in g.iter_edges():
        grouped.setdefault(a, []).append(b)
    for a, bs in grouped.items():
        adj[a] = tuple(bs)

    @lru_cache(maxsize=None)
    def best(i: int, used: int) -> int:
        if i == g.n_a:
            return 0
        value = best(i + 1, used)
        for b in adj[i]:
            if not (used >> b) & 1:
                value = max(value, 1 + best(i + 1, used | (1 << b)))
        return value

    result = best(0, 0)
    best.cache_clear()
    return result


def brute_force_best_disjoint(candidates) -> int:
    """Largest vertex-disjoint subset of (b_left, a, b, a_right) paths."""
    n = len(candidates)
    assert n <= 14, "exponential search"

    def rec(i: int, used_a: frozenset, used_b: frozenset) -> int:
        if i == n:
            return 0
        skip = rec(i + 1, used_a, used_b)
        bl, a, b, ar = candidates[i]
        if a in used_a or ar in used_a or b in used_b or bl in used_b:
            return skip
        take = 1 + rec(i + 1, used_a | {a, ar}, used_b | {b, bl})
        return max(skip, take)

    return rec(0, frozenset(), frozenset())


def ref_greedy(edges) -> list[tuple[int, int]]:
    """Reference first-pass greedy over an explicit edge sequence."""
    used_a: set[int] = set()
    used_b: set[int] = set()
    out = []
    for a, b in edges:
        if a not in used_a and b not in used_b:
            out.append((a, b))
            used_a.add(a)
            used_b.add(b)
    return out


def ref_greedy_d(edges, one_side: str, d: int) -> list[tuple[int, int]]:
    """Reference degree-bounded greedy over an explicit edge sequence."""
    partner: set[int] = set()
    load: dict[int, int] = {}
    out = []
    for a, b in edges:
        one, many = (a, b) if one_side == "a" else (b, a)
        if one not in partner and load.get(many, 0) < d:
            out.append((a, b))
            partner.add(one)
            load[many] = load.get(many, 0) + 1
    return out


def random_graph(rng: np.random.Generator, max_a: int = 8, max_b: int = 8,
                 min_a: int = 0, min_b: int = 0) -> BipartiteGraph:
    """Random bipartite graph with shuffled edge order."""
    n_a = int(rng.integers(min_a, max_a + 1))
    n_b = int(rng.integers(min_b, max_b + 1))
    if n_a == 0 or n_b == 0:
        return BipartiteGraph(n_a, n_b, [])
    density = float(rng.uniform(0.05, 0.9))
    mask = rng.random((n_a, n_b)) < density
    aa, bb = np.nonzero(mask)
    order = rng.permutation(aa.size)
    return BipartiteGraph(n_a, n_b, (aa[order].astype(np.int64), bb[order].astype(np.int64)))


@st.composite
def small_graphs(draw, max_a: int = 7, max_b: int = 7):
    n_a = draw(st.integers(0, max_a))
    n_b = draw(st.integers(0, max_b))
    pairs = [(a, b) for a in range(n_a) for b in range(n_b)]
    if pairs:
        edges = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=len(pairs)))
    else:
        edges = []
    return BipartiteGraph(n_a, n_b, edges)


@pytest.fixture(scope="session")
def warm_kernels():
    """Compile the streaming kernels once so timed sections stay honest."""
    from streammatch.algorithms import MetaParams, greedy_d, two_pass
    from streammatch.instances import gen_hard_instance
    from streammatch.stream import open_stream

    two_pass(gen_hard_instance(8), MetaParams(p=0.5, d=1, seed=0))
    greedy_d(open_stream(gen_hard_instance(8)), "a", 2)
    return True
