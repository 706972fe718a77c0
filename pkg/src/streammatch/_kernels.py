"""Compiled inner loops for the streaming passes.

State arrays use -1 for "free"; each kernel consumes one edge block and
mutates the state in stream order, returning how many edges it took.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def greedy_block(ea, eb, match_a, match_b):
    taken = 0
    for i in range(ea.size):
        a = ea[i]
        b = eb[i]
        if match_a[a] < 0 and match_b[b] < 0:
            match_a[a] = b
            match_b[b] = a
            taken += 1
    return taken


@njit(cache=True, nogil=True)
def greedy_d_block(e_one, e_many, partner, load, d):
    # 1-cap side indexes `partner`; d-cap side indexes `load`
    taken = 0
    for i in range(e_one.size):
        u = e_one[i]
        v = e_many[i]
        if partner[u] < 0 and load[v] < d:
            partner[u] = v
            load[v] += 1
            taken += 1
    return taken


@njit(cache=True, nogil=True)
def wings_block(ea, eb, d, in_mp_a, in_mp_b, matched_a, matched_b,
                wing_l, load_l, wing_r, load_r):
    """Second-pass update: grow both semi-matchings, count maximality breaks.

    Left wings live on edges (a, b) with a sampled and b unmatched;
    right wings on edges with a unmatched and b sampled.  An edge with
    both endpoints unmatched witnesses that the first-pass matching was
    not maximal.
    """
    taken_l = 0
    taken_r = 0
    violations = 0
    for i in range(ea.size):
        a = ea[i]
        b = eb[i]
        a_free = not matched_a[a]
        b_free = not matched_b[b]
        if a_free and b_free:
            violations += 1
        elif b_free:
            if in_mp_a[a] and wing_l[a] < 0 and load_l[b] < d:
                wing_l[a] = b
                load_l[b] += 1
                taken_l += 1
        elif a_free:
            if in_mp_b[b] and wing_r[b] < 0 and load_r[a] < d:
                wing_r[b] = a
                load_r[a] += 1
                taken_r += 1
    return taken_l, taken_r, violations
