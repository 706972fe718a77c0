"""Streaming matching algorithms and the approximation-factor formula.

The two-pass driver works as follows.  Pass 1 runs plain greedy and
yields a maximal matching M.  Pass 2 subsamples M into M' (each edge
kept independently with probability p), then grows two degree-bounded
semi-matchings against the stream: left wings attach sampled A-vertices
to B-vertices that M left unmatched, right wings attach sampled
B-vertices to unmatched A-vertices, with at most d wings sharing an
unmatched vertex.  A sampled edge ab with wings b' and a' forms the
length-3 augmenting path b'-a-b-a'.  A maximum vertex-disjoint subset
of these paths is applied to M.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._kernels import greedy_block, greedy_d_block, wings_block
from .graph import Matching, SemiMatching
from .oracle import _hopcroft_karp
from .stream import EdgeStream, SpaceAccountant, open_stream

SQRT2 = math.sqrt(2.0)

# candidate path (b_left, a, b, a_right): wings around the sampled edge (a, b)
Path = tuple[int, int, int, int]


class MaximalityError(ValueError):
    """The second pass saw an edge both of whose endpoints were unmatched."""


def _check_p(p: float) -> float:
    p = float(p)
    if not 0.0 < p <= 1.0:
        raise ValueError(f"sampling probability p must lie in (0, 1], got {p}")
    return p


def _check_d(d: int) -> int:
    if int(d) != d or d < 1:
        raise ValueError(f"degree cap d must be a positive integer, got {d}")
    return int(d)


@dataclass(frozen=True)
class MetaParams:
    """Parameters of the second pass: sampling probability, degree cap, seed."""

    p: float
    d: int
    seed: int = 0

    def __post_init__(self) -> None:
        _check_p(self.p)
        _check_d(self.d)


def predicted_factor(p: float, d: int) -> float:
    """Approximation factor guaranteed by the two-pass algorithm at (p, d).

    Piecewise in p with breakpoint d*(sqrt(2)-1); the two branches agree
    at the breakpoint.  Maximized at 2 - sqrt(2) for d=1, p=sqrt(2)-1
    (and again at d=2, p=2*sqrt(2)-2).
    """
    p = _check_p(p)
    d = _check_d(d)
    if p <= d * (SQRT2 - 1.0):
        return 0.5 + (1.0 / (d + p) - 1.0 / (2.0 * d)) * p
    return 0.5 + (d - p) / (6.0 * d + 2.0 * p)


def greedy(stream: EdgeStream, accountant: SpaceAccountant | None = None) -> Matching:
    """One pass of plain greedy: take every edge whose endpoints are both free.

    The result is maximal with respect to the streamed edge set and
    therefore at least half the size of a maximum matching.
    """
    match_a = np.full(stream.n_a, -1, dtype=np.int64)
    match_b = np.full(stream.n_b, -1, dtype=np.int64)
    for ea, eb in stream.start_pass().blocks():
        taken = greedy_block(ea, eb, match_a, match_b)
        if accountant is not None and taken:
            accountant.add(taken)
    idx = np.nonzero(match_a >= 0)[0]
    return Matching(zip(idx.tolist(), match_a[idx].tolist()))


def greedy_d(
    stream: EdgeStream,
    one_side: str,
    d: int,
    accountant: SpaceAccountant | None = None,
) -> SemiMatching:
    """One pass of degree-bounded greedy.

    Takes an edge iff its one_side endpoint is still free and its other
    endpoint carries fewer than d edges.  With d=1 this degenerates to
    plain greedy.
    """
    d = _check_d(d)
    if one_side not in ("a", "b"):
        raise ValueError("one_side must be 'a' or 'b'")
    n_one, n_many = (stream.n_a, stream.n_b) if one_side == "a" else (stream.n_b, stream.n_a)
    partner = np.full(n_one, -1, dtype=np.int64)
    load = np.zeros(n_many, dtype=np.int64)
    for ea, eb in stream.start_pass().blocks():
        e_one, e_many = (ea, eb) if one_side == "a" else (eb, ea)
        taken = greedy_d_block(e_one, e_many, partner, load, d)
        if accountant is not None and taken:
            accountant.add(taken)
    idx = np.nonzero(partner >= 0)[0]
    ones = idx.tolist()
    manys = partner[idx].tolist()
    pairs = zip(ones, manys) if one_side == "a" else zip(manys, ones)
    return SemiMatching(pairs, one_side, d)


def subsample(m: Matching, p: float, seed: int) -> Matching:
    """Keep each edge of m independently with probability p.

    Edges are visited in canonical sorted order, so the result depends
    only on (m, p, seed) and not on how m was produced.
    """
    p = _check_p(p)
    rng = np.random.default_rng(seed)
    edges = m.sorted_edges()
    mask = rng.random(len(edges)) < p
    return Matching(e for e, keep in zip(edges, mask) if keep)


@dataclass(frozen=True)
class PathSet:
    """Everything the second pass produced.

    candidates holds all length-3 augmenting paths found; selected is a
    maximum vertex-disjoint subset of them, the paths that augment()
    will apply.
    """

    m_prime: Matching
    s_l: SemiMatching
    s_r: SemiMatching
    candidates: tuple[Path, ...]
    selected: tuple[Path, ...]


def find_augmenting_paths(
    stream: EdgeStream,
    m: Matching,
    params: MetaParams,
    accountant: SpaceAccountant | None = None,
) -> PathSet:
    """Second pass: subsample m, grow wings, select disjoint 3-paths.

    m must be maximal for the streamed edges; the pass verifies this as
    a side effect and raises MaximalityError otherwise.
    """
    n_a, n_b = stream.n_a, stream.n_b
    m_edges = m.sorted_edges()
    if m_edges and (m_edges[-1][0] >= n_a or max(b for _, b in m_edges) >= n_b):
        raise ValueError("matching uses vertices outside the stream's vertex set")

    m_prime = subsample(m, params.p, params.seed)

    matched_a = np.zeros(n_a, dtype=np.bool_)
    matched_b = np.zeros(n_b, dtype=np.bool_)
    in_mp_a = np.zeros(n_a, dtype=np.bool_)
    in_mp_b = np.zeros(n_b, dtype=np.bool_)
    if m_edges:
        ma = np.fromiter((a for a, _ in m_edges), dtype=np.int64, count=len(m_edges))
        mb = np.fromiter((b for _, b in m_edges), dtype=np.int64, count=len(m_edges))
        matched_a[ma] = True
        matched_b[mb] = True
    for a, b in m_prime.sorted_edges():
        in_mp_a[a] = True
        in_mp_b[b] = True

    wing_l = np.full(n_a, -1, dtype=np.int64)
    load_l = np.zeros(n_b, dtype=np.int64)
    wing_r = np.full(n_b, -1, dtype=np.int64)
    load_r = np.zeros(n_a, dtype=np.int64)

    violations = 0
    for ea, eb in stream.start_pass().blocks():
        tl, tr, v = wings_block(
            ea, eb, params.d, in_mp_a, in_mp_b, matched_a, matched_b,
            wing_l, load_l, wing_r, load_r,
        )
        violations += v
        if accountant is not None and (tl or tr):
            accountant.add(tl + tr)
    if violations:
        raise MaximalityError(
            f"first-pass matching is not maximal: {violations} stream edges "
            "have both endpoints unmatched"
        )

    candidates: list[Path] = []
    for a, b in m_prime.sorted_edges():
        bl = int(wing_l[a])
        ar = int(wing_r[b])
        if bl >= 0 and ar >= 0:
            candidates.append((bl, a, b, ar))
    selected = _select_disjoint(candidates)
    if accountant is not None and selected:
        accountant.add(len(selected))

    la = np.nonzero(wing_l >= 0)[0]
    s_l = SemiMatching(zip(la.tolist(), wing_l[la].tolist()), "a", params.d)
    rb = np.nonzero(wing_r >= 0)[0]
    s_r = SemiMatching(zip(wing_r[rb].tolist(), rb.tolist()), "b", params.d)

    return PathSet(
        m_prime=m_prime,
        s_l=s_l,
        s_r=s_r,
        candidates=tuple(candidates),
        selected=tuple(selected),
    )


def _select_disjoint(candidates: list[Path]) -> tuple[Path, ...]:
    """Maximum vertex-disjoint subset of candidate paths.

    Middles (a, b) are distinct across candidates, so only wings can
    collide.  Viewing each candidate as an edge (b_left, a_right) in a
    conflict graph, disjoint path sets are exactly matchings there; a
    maximum matching gives the largest one.  Since each wing vertex is
    shared by at most d candidates, the conflict graph has max degree d
    and the selection keeps at least a 1/d fraction of the candidates.
    """
    if not candidates:
        return ()
    lefts = sorted({c[0] for c in candidates})
    rights = sorted({c[3] for c in candidates})
    lmap = {v: i for i, v in enumerate(lefts)}
    rmap = {v: i for i, v in enumerate(rights)}
    adj: list[list[int]] = [[] for _ in lefts]
    representative: dict[tuple[int, int], Path] = {}
    for cand in candidates:
        key = (lmap[cand[0]], rmap[cand[3]])
        if key not in representative:
            representative[key] = cand
            adj[key[0]].append(key[1])
    for neighbours in adj:
        neighbours.sort()
    match_l, _ = _hopcroft_karp(len(lefts), len(rights), adj)
    selected = [
        representative[(li, ri)]
        for li, ri in enumerate(match_l)
        if ri >= 0
    ]
    selected.sort(key=lambda c: c[1])
    return tuple(selected)


def augment(m: Matching, paths: PathSet) -> Matching:
    """Apply the selected paths: drop each middle edge, add its two wings."""
    drop = {(a, b) for (_, a, b, _) in paths.selected}
    new_edges: list[tuple[int, int]] = [e for e in m.sorted_edges() if e not in drop]
    for bl, a, b, ar in paths.selected:
        if (a, b) not in m.edges:
            raise ValueError(f"selected path middle ({a}, {b}) is not an edge of the matching")
        new_edges.append((a, bl))
        new_edges.append((ar, b))
    return Matching(new_edges)


@dataclass(frozen=True)
class RunReport:
    """Observables of one two-pass run."""

    first_pass_size: int
    sampled_size: int
    wing_sizes: tuple[int, int]
    num_candidates: int
    num_augmentations: int
    final_size: int
    mu: int | None
    epsilon: float | None
    peak_space: int
    passes: int


def two_pass(
    source,
    params: MetaParams,
    *,
    mu: int | None = None,
    accountant: SpaceAccountant | None = None,
) -> tuple[Matching, RunReport]:
    """Run the full two-pass algorithm on a streamable graph.

    mu is an externally supplied maximum-matching size (the driver never
    computes one itself); when given, the report carries the realized
    advantage epsilon = final/mu - 1/2.
    """
    acct = accountant if accountant is not None else SpaceAccountant()
    stream = open_stream(source)
    first = greedy(stream, acct)
    paths = find_augmenting_paths(stream, first, params, acct)
    final = augment(first, paths)
    # wings and selected paths are dropped once applied; the matching grew
    acct.release(len(paths.s_l) + len(paths.s_r) + len(paths.selected))
    acct.add(len(paths.selected))

    # epsilon measures the first pass: |M| = (1/2 + epsilon) * mu
    epsilon = None
    if mu:
        epsilon = len(first) / mu - 0.5
    report = RunReport(
        first_pass_size=len(first),
        sampled_size=len(paths.m_prime),
        wing_sizes=(len(paths.s_l), len(paths.s_r)),
        num_candidates=len(paths.candidates),
        num_augmentations=len(paths.selected),
        final_size=len(final),
        mu=mu,
        epsilon=epsilon,
        peak_space=acct.peak,
        passes=stream.passes_used,
    )
    return final, report
