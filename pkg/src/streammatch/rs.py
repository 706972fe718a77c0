"""Ruzsa-Szemeredi graph machinery.

A colouring-based construction produces bipartite graphs on N = m^(2m)
vertices per side whose edge set partitions into induced matchings, one
per k-subset I of the coordinate axes.  Each matching M_I is mirrored
by a vertex-disjoint counterpart M_I' so that M_I and M_I' together
form one larger matching.  A brute-force certifier checks the induced
and disjointness properties exhaustively at desk scale.  On top of a
certified instance, gen_lambda assembles padded hard inputs: a sampled
union of sub-matchings plus pads attached to the sides one special
matching leaves uncovered, optionally overlaid with a perfect matching
that streams first so plain greedy recovers exactly it.

Vertices are vectors in {0..m^2-1}^m, identified with their big-endian
rank.  Colours come from summing the I-coordinates and reducing modulo
the strip period w: each period starts with a red strip of width m/3,
then a white strip of width k, a blue strip of width m/3, and white for
the remainder.  M_I pairs each blue vertex on the left side whose
coordinates all exceed the shift m/(3k) + 1 with the vertex obtained by
subtracting the shift from its I-coordinates, which is always red.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .graph import BipartiteGraph, Edge, Matching, is_maximal
from .oracle import maximum_matching_size

_MATERIALIZE_CAP = 10_000
_ORACLE_CAP = 200_000


def _lattice_valid(m: int, k: int) -> bool:
    return m >= 3 and k >= 1 and m % 3 == 0 and m % (3 * k) == 0


def nearest_valid_params(limit: int = 8) -> list[tuple[int, int]]:
    """Smallest (m, k) pairs the integrality constraints admit."""
    found: list[tuple[int, int]] = []
    for m in itertools.count(3, 3):
        for k in range(1, m // 3 + 1):
            if _lattice_valid(m, k):
                found.append((m, k))
                if len(found) >= limit:
                    return found
    return found


@dataclass(frozen=True)
class ColouringParams:
    """Construction parameters (m, k); everything else is derived.

    m is the vector dimension, k the white-strip width and the size of
    the index sets.  The derived density parameter is delta = 6k/m.
    Integrality of the strip period and of the pairing shift requires m
    divisible by 3 and by 3k; other inputs are rejected.
    """

    m: int
    k: int

    def __post_init__(self) -> None:
        if not _lattice_valid(self.m, self.k):
            suggestions = ", ".join(str(p) for p in nearest_valid_params())
            raise ValueError(
                f"(m={self.m}, k={self.k}) violates the integrality constraints "
                f"(need m % 3 == 0 and m % 3k == 0, k >= 1); "
                f"nearest valid (m, k): {suggestions}"
            )

    @property
    def delta(self) -> Fraction:
        return Fraction(6 * self.k, self.m)

    @property
    def w(self) -> int:
        """Strip period: red m/3, white k, blue m/3, white again."""
        return 2 * self.m // 3 + 2 * self.k

    @property
    def shift(self) -> int:
        return self.m // (3 * self.k) + 1

    @property
    def coord_base(self) -> int:
        return self.m * self.m

    @property
    def n_side(self) -> int:
        return self.coord_base ** self.m

    def colour_of_sum(self, s: int) -> str:
        r = s % self.w
        third = self.m // 3
        if r < third:
            return "red"
        if r < third + self.k:
            return "white"
        if r < 2 * third + self.k:
            return "blue"
        return "white"

    def family_threshold(self) -> int:
        """Largest allowed pairwise intersection: floor((5*delta/12) * k)."""
        return math.floor(Fraction(5, 12) * self.delta * self.k)


def colour_vertex(params: ColouringParams, v, index_set) -> str:
    """Colour of vector v under the index set's coordinate sum."""
    idx = sorted(set(int(i) for i in index_set))
    if len(idx) != params.k:
        raise ValueError(f"index set must have exactly k={params.k} coordinates")
    if idx and (idx[0] < 0 or idx[-1] >= params.m):
        raise ValueError("index set out of range")
    vec = list(v)
    if len(vec) != params.m:
        raise ValueError(f"vector must have m={params.m} coordinates")
    if any(c < 0 or c >= params.coord_base for c in vec):
        raise ValueError(f"coordinates must lie in [0, {params.coord_base})")
    return params.colour_of_sum(sum(vec[i] for i in idx))


def rank_vector(params: ColouringParams, v) -> int:
    """Big-endian rank of a coordinate vector in [0, n_side)."""
    r = 0
    for c in v:
        r = r * params.coord_base + int(c)
    return r


def unrank_vector(params: ColouringParams, rank: int) -> tuple[int, ...]:
    coords = []
    for _ in range(params.m):
        coords.append(rank % params.coord_base)
        rank //= params.coord_base
    return tuple(reversed(coords))


def build_matching_pair(
    params: ColouringParams,
    index_set,
    materialize_cap: int = _MATERIALIZE_CAP,
) -> tuple[list[Edge], list[Edge]]:
    """The matching M_I and its mirrored counterpart M_I'.

    M_I pairs blue left-side vertices (all coordinates strictly above
    the shift) with the red vertex reached by subtracting the shift on
    the I-coordinates; M_I' applies the same rule from the right side.
    Both are returned as (left, right) rank pairs in canonical order.
    """
    if params.n_side > materialize_cap:
        raise ValueError(
            f"n_side = {params.n_side} exceeds the materialization cap "
            f"{materialize_cap}; vector enumeration is only done at desk scale"
        )
    idx = sorted(set(int(i) for i in index_set))
    if len(idx) != params.k or idx[0] < 0 or idx[-1] >= params.m:
        raise ValueError(f"index set must be a k={params.k} subset of [0, {params.m})")

    shift = params.shift
    eligible = range(shift + 1, params.coord_base)
    in_i = [i in idx for i in range(params.m)]
    pairs: list[tuple[int, int]] = []
    for vec in itertools.product(eligible, repeat=params.m):
        s = sum(vec[i] for i in idx)
        if params.colour_of_sum(s) != "blue":
            continue
        partner = tuple(c - shift if ini else c for c, ini in zip(vec, in_i))
        if params.colour_of_sum(s - params.k * shift) != "red":
            raise AssertionError("shifted partner of a blue vertex must be red")
        pairs.append((rank_vector(params, vec), rank_vector(params, partner)))

    m_i = sorted((blue, red) for blue, red in pairs)
    m_i_prime = sorted((red, blue) for blue, red in pairs)
    return m_i, m_i_prime


def build_family(params: ColouringParams, max_intersection: int | None = None) -> list[frozenset[int]]:
    """Greedy family of k-subsets with bounded pairwise intersections.

    Candidates are scanned in lexicographic order and kept when their
    intersection with every already-kept set stays within the
    threshold.  Deterministic; may return an empty list.
    """
    threshold = params.family_threshold() if max_intersection is None else int(max_intersection)
    family: list[frozenset[int]] = []
    for combo in itertools.combinations(range(params.m), params.k):
        cand = frozenset(combo)
        if all(len(cand & kept) <= threshold for kept in family):
            family.append(cand)
    return family


def _set_label(index_set: frozenset[int], primed: bool) -> str:
    body = ",".join(str(i) for i in sorted(index_set))
    return f"M[{body}]'" if primed else f"M[{body}]"


@dataclass(frozen=True)
class RSMatching:
    """One matching of the partition, tagged by its index set."""

    index_set: frozenset[int]
    primed: bool
    edges: tuple[Edge, ...]

    @property
    def label(self) -> str:
        return _set_label(self.index_set, self.primed)


@dataclass
class RSInstance:
    """A concrete instance: parameters, family, and all matchings.

    matchings holds, for each family member in order, first M_I and
    then M_I'.  certificate stays None until certify_rs has run.
    """

    params: ColouringParams
    family: tuple[frozenset[int], ...]
    matchings: tuple[RSMatching, ...]
    certificate: "RSCertificate | None" = field(default=None, compare=False)

    @property
    def n_side(self) -> int:
        return self.params.n_side

    def num_edges(self) -> int:
        return sum(len(mm.edges) for mm in self.matchings)

    def to_graph(self) -> BipartiteGraph:
        """Union of all matchings, edge order following the matching list."""
        edges: list[Edge] = []
        for mm in self.matchings:
            edges.extend(mm.edges)
        return BipartiteGraph(self.n_side, self.n_side, edges)


def build_rs_instance(
    params: ColouringParams,
    family: list[frozenset[int]] | None = None,
    materialize_cap: int = _MATERIALIZE_CAP,
) -> RSInstance:
    """Build matchings for every family member (default: build_family)."""
    fam = [frozenset(i) for i in family] if family is not None else build_family(params)
    matchings: list[RSMatching] = []
    for index_set in fam:
        m_i, m_i_prime = build_matching_pair(params, index_set, materialize_cap)
        matchings.append(RSMatching(index_set, False, tuple(m_i)))
        matchings.append(RSMatching(index_set, True, tuple(m_i_prime)))
    return RSInstance(params, tuple(fam), tuple(matchings))


@dataclass(frozen=True)
class RSCertificate:
    """Brute-force verdicts over all matchings of an instance.

    induced_violations lists (holder, intruder, count) triples: edges
    of the intruder matching that live inside the holder's vertex set.
    Near-perfect coverage is reported as achieved fractions, not
    asserted, because the asymptotic size target only binds for small
    delta.
    """

    ok: bool
    edge_disjoint: bool
    matchings_valid: bool
    induced_violations: tuple[tuple[str, str, int], ...]
    matching_sizes: tuple[tuple[str, int], ...]
    pair_union_sizes: tuple[tuple[str, int, float], ...]
    target_fraction: float
    n_side: int

    def to_text(self) -> str:
        lines = [
            f"n_side {self.n_side}",
            f"edge_disjoint {'pass' if self.edge_disjoint else 'FAIL'}",
            f"matchings_valid {'pass' if self.matchings_valid else 'FAIL'}",
            f"induced {'pass' if not self.induced_violations else 'FAIL'}",
        ]
        for holder, intruder, count in self.induced_violations:
            lines.append(f"induced_violation {holder} <- {intruder}: {count} edges")
        for label, size in self.matching_sizes:
            lines.append(f"size {label} {size}")
        for label, size, fraction in self.pair_union_sizes:
            lines.append(
                f"near_perfect {label} union_size {size} fraction {fraction:.6f} "
                f"(asymptotic target fraction {self.target_fraction:.6f})"
            )
        lines.append(f"certificate {'pass' if self.ok else 'FAIL'}")
        return "\n".join(lines)


def certify_rs(instance: RSInstance) -> RSCertificate:
    """Exhaustively check disjointness and inducedness; record the result.

    For every matching M the union graph restricted to M's vertices
    must contain exactly M's edges; every intruding edge is reported
    with the pair of matchings involved.  The certificate is stored on
    the instance so downstream samplers can insist on it.
    """
    n = instance.n_side
    all_edges: list[Edge] = []
    for mm in instance.matchings:
        all_edges.extend(mm.edges)
    edge_disjoint = len(set(all_edges)) == len(all_edges)

    matchings_valid = True
    for mm in instance.matchings:
        try:
            Matching(mm.edges)
        except ValueError:
            matchings_valid = False

    violations: list[tuple[str, str, int]] = []
    if all_edges:
        ea = np.fromiter((a for a, _ in all_edges), dtype=np.int64, count=len(all_edges))
        eb = np.fromiter((b for _, b in all_edges), dtype=np.int64, count=len(all_edges))
        offsets = []
        pos = 0
        for mm in instance.matchings:
            offsets.append((pos, pos + len(mm.edges)))
            pos += len(mm.edges)
        for i, holder in enumerate(instance.matchings):
            va = np.zeros(n, dtype=bool)
            vb = np.zeros(n, dtype=bool)
            for a, b in holder.edges:
                va[a] = True
                vb[b] = True
            inside = va[ea] & vb[eb]
            for j, intruder in enumerate(instance.matchings):
                if j == i:
                    continue
                lo, hi = offsets[j]
                count = int(np.count_nonzero(inside[lo:hi]))
                if count:
                    violations.append((holder.label, intruder.label, count))

    sizes = tuple((mm.label, len(mm.edges)) for mm in instance.matchings)
    by_set: dict[frozenset[int], int] = {}
    for mm in instance.matchings:
        by_set[mm.index_set] = by_set.get(mm.index_set, 0) + len(mm.edges)
    pair_unions = tuple(
        (_set_label(index_set, False) + "+'", size, size / n)
        for index_set, size in sorted(by_set.items(), key=lambda kv: sorted(kv[0]))
    )
    target = float(1 - 2 * instance.params.delta)

    cert = RSCertificate(
        ok=edge_disjoint and matchings_valid and not violations,
        edge_disjoint=edge_disjoint,
        matchings_valid=matchings_valid,
        induced_violations=tuple(violations),
        matching_sizes=sizes,
        pair_union_sizes=pair_unions,
        target_fraction=target,
        n_side=n,
    )
    instance.certificate = cert
    return cert


@dataclass(frozen=True)
class LambdaInstance:
    """A sampled padded instance ready for streaming.

    The assembled graph's edge order is the stream order: the overlay
    (when present) first, then alice_edges (sampled sub-matchings, with
    overlay duplicates removed), then bob_edges (the two pad
    matchings).  RS vertices keep their ranks; pads take the next
    indices on their side.
    """

    rs: RSInstance
    plus: bool
    seed: int
    special_index: int
    subsample_size: int
    alice_edges: tuple[Edge, ...]
    bob_edges: tuple[Edge, ...]
    pad_a: int
    pad_b: int
    overlay: Matching | None
    graph: BipartiteGraph
    mu_witness: int
    mu: int | None


def gen_lambda(
    instance: RSInstance,
    plus: bool = False,
    seed: int = 0,
    subsample_size: int | None = None,
    designated: int = 0,
    oracle_cap: int = _ORACLE_CAP,
) -> LambdaInstance:
    """Sample a padded hard instance from a certified construction.

    Each matching is subsampled to a common size (the default target
    (1/2 - 2*delta)*N is clamped into [0, min matching size]; pass
    subsample_size to override).  A special matching M_s is drawn
    uniformly and pads attach to exactly the vertices M_s leaves
    uncovered, one perfect matching per side.  With plus=True the
    designated family pair is removed first, completed to a perfect
    matching P by index-order pairing of uncovered vertices, and P is
    placed at the front of the stream.
    """
    if instance.certificate is None:
        raise ValueError("instance is not certified; run certify_rs first")
    if not instance.certificate.ok:
        raise ValueError("instance failed certification; refusing to sample")
    n = instance.n_side
    rng = np.random.default_rng(seed)

    overlay: Matching | None = None
    if plus:
        if not 0 <= designated < len(instance.family):
            raise ValueError(f"designated index {designated} outside the family")
        pair_set = instance.family[designated]
        pair_edges: list[Edge] = []
        remaining: list[RSMatching] = []
        for mm in instance.matchings:
            if mm.index_set == pair_set:
                pair_edges.extend(mm.edges)
            else:
                remaining.append(mm)
        if not remaining:
            raise ValueError("plus sampling needs at least one non-designated matching")
        covered_a = {a for a, _ in pair_edges}
        covered_b = {b for _, b in pair_edges}
        free_a = [a for a in range(n) if a not in covered_a]
        free_b = [b for b in range(n) if b not in covered_b]
        completion = list(zip(free_a, free_b))
        overlay = Matching(pair_edges + completion)
        if len(overlay) != n:
            raise RuntimeError("overlay completion failed to produce a perfect matching")
    else:
        remaining = list(instance.matchings)

    delta = instance.params.delta
    target = math.floor((Fraction(1, 2) - 2 * delta) * n)
    requested = target if subsample_size is None else int(subsample_size)
    size = max(0, min(requested, min(len(mm.edges) for mm in remaining)))

    alice: list[Edge] = []
    for mm in remaining:
        keep = np.sort(rng.permutation(len(mm.edges))[:size])
        alice.extend(mm.edges[i] for i in keep.tolist())

    s_idx = int(rng.integers(len(remaining)))
    m_s = remaining[s_idx]
    covered_a = {a for a, _ in m_s.edges}
    covered_b = {b for _, b in m_s.edges}
    a_bar = [a for a in range(n) if a not in covered_a]
    b_bar = [b for b in range(n) if b not in covered_b]
    # pads are sized to exactly the uncovered counts so both pad
    # matchings stay perfect at any delta
    m_x = [(n + j, b) for j, b in enumerate(b_bar)]
    m_y = [(a, n + j) for j, a in enumerate(a_bar)]
    bob = m_x + m_y

    if plus:
        assert overlay is not None
        p_edges = list(overlay.sorted_edges())
        p_set = overlay.edges
        stream = p_edges + [e for e in alice if e not in p_set] + bob
    else:
        stream = alice + bob

    graph = BipartiteGraph(n + len(b_bar), n + len(a_bar), stream)
    witness = size + len(m_x) + len(m_y)

    mu: int | None = None
    if graph.num_edges <= oracle_cap:
        mu = maximum_matching_size(graph)
        if mu < witness:
            raise RuntimeError(
                f"oracle value {mu} fell below the witness {witness}; construction bug"
            )
        if plus and mu < n:
            raise RuntimeError("plus instance lost its perfect overlay; construction bug")
    if plus:
        assert overlay is not None
        if not is_maximal(graph, overlay):
            raise RuntimeError("overlay is not maximal in the assembled graph")

    return LambdaInstance(
        rs=instance,
        plus=plus,
        seed=seed,
        special_index=s_idx,
        subsample_size=size,
        alice_edges=tuple(alice),
        bob_edges=tuple(bob),
        pad_a=len(b_bar),
        pad_b=len(a_bar),
        overlay=overlay,
        graph=graph,
        mu_witness=witness,
        mu=mu,
    )
