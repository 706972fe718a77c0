"""Instance generators: the layered worst case and planted random graphs.

The layered worst case drives the two-pass algorithm to its guarantee.
Its vertex sides split into inner and outer halves of size N each
(inner indices 0..N-1, outer indices N..2N-1 on both sides).  A perfect
matching between the inner halves arrives first, so greedy matches
exactly that and nothing else.  Then the left wing section connects
inner A-vertex i to outer B-vertices 0..i, streamed with i descending
and j ascending, and the right section mirrors it (outer A-vertex i to
inner B-vertices 0..i, same order).  A maximum matching pairs inner
with outer straight across, so mu = 2N while greedy stops at N.
"""

from __future__ import annotations

from collections.abc import Iterator
from dataclasses import dataclass

import numpy as np

from .algorithms import PathSet
from .graph import BipartiteGraph, Matching

_MATERIALIZE_CAP = 5_000_000
_BLOCK_EDGES = 1 << 20


def _wing_section(N: int, a_offset: int, b_offset: int) -> Iterator[tuple[np.ndarray, np.ndarray]]:
    # rows are packed into ~_BLOCK_EDGES buffers; yielded slices are
    # views into scratch storage, valid only until the next block
    b_idx = np.arange(b_offset, b_offset + N, dtype=np.int64)
    buf_a = np.empty(_BLOCK_EDGES + N, dtype=np.int64)
    buf_b = np.empty(_BLOCK_EDGES + N, dtype=np.int64)
    pos = 0
    for i in range(N - 1, -1, -1):
        row = i + 1
        buf_a[pos:pos + row] = a_offset + i
        buf_b[pos:pos + row] = b_idx[:row]
        pos += row
        if pos >= _BLOCK_EDGES:
            yield buf_a[:pos], buf_b[:pos]
            pos = 0
    if pos:
        yield buf_a[:pos], buf_b[:pos]


class HardInstance:
    """Streamable layered worst case with known maximum matching size."""

    __slots__ = ("N", "n_a", "n_b")

    def __init__(self, N: int):
        if N < 1:
            raise ValueError("N must be positive")
        self.N = int(N)
        self.n_a = 2 * self.N
        self.n_b = 2 * self.N

    @property
    def mu(self) -> int:
        return 2 * self.N

    @property
    def num_edges(self) -> int:
        return self.N + self.N * (self.N + 1)

    def stream_blocks(self) -> Iterator[tuple[np.ndarray, np.ndarray]]:
        N = self.N
        inner = np.arange(N, dtype=np.int64)
        yield inner, inner
        yield from _wing_section(N, a_offset=0, b_offset=N)
        yield from _wing_section(N, a_offset=N, b_offset=0)

    def max_matching_witness(self) -> Matching:
        """A perfect matching: inner A to outer B and outer A to inner B."""
        N = self.N
        return Matching(
            [(i, N + i) for i in range(N)] + [(N + i, i) for i in range(N)]
        )

    def to_graph(self) -> BipartiteGraph:
        """Materialize all edges; only sensible for small N."""
        if self.num_edges > _MATERIALIZE_CAP:
            raise ValueError(
                f"instance has {self.num_edges} edges; materializing above "
                f"{_MATERIALIZE_CAP} is refused, consume stream_blocks() instead"
            )
        eas = []
        ebs = []
        for ea, eb in self.stream_blocks():
            eas.append(ea.copy())
            ebs.append(eb.copy())
        return BipartiteGraph(self.n_a, self.n_b, (np.concatenate(eas), np.concatenate(ebs)))

    def __repr__(self) -> str:
        return f"HardInstance(N={self.N})"


def gen_hard_instance(N: int) -> HardInstance:
    """Layered worst case with mu = 2N and 2N vertices per side."""
    return HardInstance(N)


@dataclass(frozen=True)
class IndexExtremes:
    """Wing boundary indices observed on the layered worst case.

    i_min is the smallest inner A-index holding a left wing, i_max the
    largest inner B-index holding a right wing; sampled edges between
    the two boundaries are exactly the ones with both wings.
    """

    i_min: int | None
    i_max: int | None
    num_candidates: int


def check_index_extremes(paths: PathSet) -> IndexExtremes:
    winged_a = paths.s_l.covered_one_side()
    winged_b = paths.s_r.covered_one_side()
    return IndexExtremes(
        i_min=min(winged_a) if winged_a else None,
        i_max=max(winged_b) if winged_b else None,
        num_candidates=len(paths.candidates),
    )


def wing_structure_ok(paths: PathSet) -> bool:
    """Check the wing boundary shape the layered stream order forces.

    Left wings must occupy an up-set of the sampled A-indices (every
    sampled index above the smallest winged one is winged too), and
    right wings a down-set of the sampled B-indices.
    """
    sampled_a = paths.m_prime.a_vertices()
    winged_a = paths.s_l.covered_one_side()
    if not winged_a <= sampled_a:
        return False
    if winged_a:
        i_min = min(winged_a)
        if any(a >= i_min and a not in winged_a for a in sampled_a):
            return False
    sampled_b = paths.m_prime.b_vertices()
    winged_b = paths.s_r.covered_one_side()
    if not winged_b <= sampled_b:
        return False
    if winged_b:
        i_max = max(winged_b)
        if any(b <= i_max and b not in winged_b for b in sampled_b):
            return False
    return True


def gen_random_planted(n: int, extra_density: float, seed: int) -> tuple[BipartiteGraph, Matching]:
    """Random graph on n+n vertices with a planted perfect matching.

    A uniform permutation plants a perfect matching (so mu = n exactly);
    every other vertex pair becomes an edge independently with
    probability extra_density.  The edge order is a uniform shuffle.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if not 0.0 <= extra_density <= 1.0:
        raise ValueError("extra_density must lie in [0, 1]")
    rng = np.random.default_rng(seed)
    perm = rng.permutation(n).astype(np.int64)
    planted_codes = np.arange(n, dtype=np.int64) * n + perm

    total = n * n
    num_extra = int(rng.binomial(total - n, extra_density)) if extra_density > 0 else 0
    extra_codes = _sample_complement(rng, total, np.sort(planted_codes), num_extra)

    codes = np.concatenate((planted_codes, extra_codes))
    order = rng.permutation(codes.size)
    codes = codes[order]
    graph = BipartiteGraph(n, n, (codes // n, codes % n))
    planted = Matching(zip(range(n), perm.tolist()))
    return graph, planted


def _sample_complement(rng: np.random.Generator, total: int, forbidden: np.ndarray, k: int) -> np.ndarray:
    """k distinct codes uniform over [0, total) minus the forbidden set."""
    if k == 0:
        return np.empty(0, dtype=np.int64)
    free = total - forbidden.size
    if total <= 1 << 22 or 3 * k >= free:
        # dense regime: enumerate the complement outright
        complement = np.setdiff1d(np.arange(total, dtype=np.int64), forbidden)
        keep = rng.permutation(complement.size)[:k]
        return complement[np.sort(keep)]
    chosen = np.empty(0, dtype=np.int64)
    while chosen.size < k:
        batch = rng.integers(0, total, size=2 * (k - chosen.size) + 16, dtype=np.int64)
        pos = np.searchsorted(forbidden, batch)
        hit = (pos < forbidden.size) & (forbidden[np.minimum(pos, forbidden.size - 1)] == batch)
        chosen = np.unique(np.concatenate((chosen, batch[~hit])))
    # trim by a seeded subsample so the kept codes stay exchangeable
    keep = rng.permutation(chosen.size)[:k]
    return chosen[np.sort(keep)]
