"""Bipartite graphs, matchings, and the edge-list text format.

Vertices on the two sides live in separate index spaces 0..n_a-1 and
0..n_b-1.  A graph's edge sequence is meaningful: it is the order in
which edges arrive when the graph is streamed.
"""

from __future__ import annotations

import io
import os
from collections.abc import Iterable, Iterator
from dataclasses import dataclass

import numpy as np

Edge = tuple[int, int]


class GraphFormatError(ValueError):
    """A graph file violates the text format."""


class BipartiteGraph:
    """Immutable bipartite graph with an ordered, duplicate-free edge list.

    Edges are stored as two parallel int64 arrays so large instances can
    be handed to vectorized consumers without conversion.
    """

    __slots__ = ("n_a", "n_b", "_ea", "_eb")

    def __init__(self, n_a: int, n_b: int, edges: Iterable[Edge] | tuple[np.ndarray, np.ndarray]):
        if n_a < 0 or n_b < 0:
            raise ValueError("side sizes must be non-negative")
        self.n_a = int(n_a)
        self.n_b = int(n_b)
        if isinstance(edges, tuple) and len(edges) == 2 and isinstance(edges[0], np.ndarray):
            ea = np.ascontiguousarray(edges[0], dtype=np.int64)
            eb = np.ascontiguousarray(edges[1], dtype=np.int64)
            if ea.shape != eb.shape or ea.ndim != 1:
                raise ValueError("edge arrays must be 1-d and of equal length")
        else:
            pairs = list(edges)
            ea = np.fromiter((e[0] for e in pairs), dtype=np.int64, count=len(pairs))
            eb = np.fromiter((e[1] for e in pairs), dtype=np.int64, count=len(pairs))
        if ea.size:
            if ea.min(initial=0) < 0 or eb.min(initial=0) < 0:
                raise ValueError("vertex indices must be non-negative")
            if ea.max(initial=-1) >= self.n_a:
                raise ValueError(f"A-side index {int(ea.max())} out of range for n_a={self.n_a}")
            if eb.max(initial=-1) >= self.n_b:
                raise ValueError(f"B-side index {int(eb.max())} out of range for n_b={self.n_b}")
            # duplicate check via combined codes; sides are < 2**31 so this cannot overflow
            codes = ea * max(self.n_b, 1) + eb
            if np.unique(codes).size != codes.size:
                raise ValueError("duplicate edges are not allowed")
        ea.setflags(write=False)
        eb.setflags(write=False)
        self._ea = ea
        self._eb = eb

    @property
    def num_edges(self) -> int:
        return int(self._ea.size)

    def edge_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """Read-only (A-endpoints, B-endpoints) arrays in stream order."""
        return self._ea, self._eb

    def edge_list(self) -> list[Edge]:
        return list(zip(self._ea.tolist(), self._eb.tolist()))

    def edge_set(self) -> frozenset[Edge]:
        return frozenset(self.edge_list())

    def iter_edges(self) -> Iterator[Edge]:
        return iter(self.edge_list())

    def stream_blocks(self) -> Iterator[tuple[np.ndarray, np.ndarray]]:
        """Yield the edge sequence as (ea, eb) array blocks, in stream order."""
        if self._ea.size:
            yield self._ea, self._eb

    def __repr__(self) -> str:
        return f"BipartiteGraph(n_a={self.n_a}, n_b={self.n_b}, m={self.num_edges})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BipartiteGraph):
            return NotImplemented
        return (
            self.n_a == other.n_a
            and self.n_b == other.n_b
            and np.array_equal(self._ea, other._ea)
            and np.array_equal(self._eb, other._eb)
        )

    def __hash__(self) -> int:
        return hash((self.n_a, self.n_b, self._ea.tobytes(), self._eb.tobytes()))


class Matching:
    """A set of edges no two of which share an endpoint on either side.

    Disjointness is checked at construction, so a Matching instance is
    valid by existence.  Whether its edges belong to a particular graph
    is a separate question answered by validate_matching.
    """

    __slots__ = ("_edges", "_by_a", "_by_b")

    def __init__(self, edges: Iterable[Edge]):
        sorted_edges = sorted((int(a), int(b)) for a, b in edges)
        by_a: dict[int, int] = {}
        by_b: dict[int, int] = {}
        for a, b in sorted_edges:
            if a < 0 or b < 0:
                raise ValueError("vertex indices must be non-negative")
            if a in by_a:
                raise ValueError(f"A-vertex {a} is covered twice")
            if b in by_b:
                raise ValueError(f"B-vertex {b} is covered twice")
            by_a[a] = b
            by_b[b] = a
        self._edges = tuple(sorted_edges)
        self._by_a = by_a
        self._by_b = by_b

    @property
    def edges(self) -> frozenset[Edge]:
        return frozenset(self._edges)

    def sorted_edges(self) -> tuple[Edge, ...]:
        """Edges in canonical (A-index, B-index) order."""
        return self._edges

    def a_vertices(self) -> frozenset[int]:
        return frozenset(self._by_a)

    def b_vertices(self) -> frozenset[int]:
        return frozenset(self._by_b)

    def partner_of_a(self, a: int) -> int | None:
        return self._by_a.get(a)

    def partner_of_b(self, b: int) -> int | None:
        return self._by_b.get(b)

    def __len__(self) -> int:
        return len(self._edges)

    def __iter__(self) -> Iterator[Edge]:
        return iter(self._edges)

    def __contains__(self, edge: Edge) -> bool:
        a, b = edge
        return self._by_a.get(a) == b

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Matching):
            return NotImplemented
        return self._edges == other._edges

    def __hash__(self) -> int:
        return hash(self._edges)

    def __repr__(self) -> str:
        return f"Matching(size={len(self._edges)})"


class SemiMatching:
    """Edge set matching one side at most once and the other at most d times.

    one_side names the side with the 1-cap ("a" or "b"); the opposite
    side carries the d-cap.
    """

    __slots__ = ("_edges", "one_side", "d", "_partner", "_load")

    def __init__(self, edges: Iterable[Edge], one_side: str, d: int):
        if one_side not in ("a", "b"):
            raise ValueError("one_side must be 'a' or 'b'")
        if d < 1:
            raise ValueError("degree cap d must be at least 1")
        self.one_side = one_side
        self.d = int(d)
        sorted_edges = sorted((int(a), int(b)) for a, b in edges)
        partner: dict[int, int] = {}
        load: dict[int, int] = {}
        for a, b in sorted_edges:
            if a < 0 or b < 0:
                raise ValueError("vertex indices must be non-negative")
            one, many = (a, b) if one_side == "a" else (b, a)
            if one in partner:
                raise ValueError(f"1-cap vertex {one} is covered twice")
            load[many] = load.get(many, 0) + 1
            if load[many] > self.d:
                raise ValueError(f"d-cap vertex {many} exceeds degree {self.d}")
            partner[one] = many
        self._edges = tuple(sorted_edges)
        self._partner = partner
        self._load = load

    @property
    def edges(self) -> frozenset[Edge]:
        return frozenset(self._edges)

    def sorted_edges(self) -> tuple[Edge, ...]:
        return self._edges

    def covered_one_side(self) -> frozenset[int]:
        """Vertices of the 1-cap side that carry an edge."""
        return frozenset(self._partner)

    def partner(self, v: int) -> int | None:
        """The d-side vertex matched to 1-side vertex v, if any."""
        return self._partner.get(v)

    def load_of(self, v: int) -> int:
        """Number of edges at d-side vertex v."""
        return self._load.get(v, 0)

    def __len__(self) -> int:
        return len(self._edges)

    def __iter__(self) -> Iterator[Edge]:
        return iter(self._edges)

    def __repr__(self) -> str:
        return f"SemiMatching(size={len(self._edges)}, one_side={self.one_side!r}, d={self.d})"


@dataclass(frozen=True)
class MatchingReport:
    """Outcome of validate_matching; falsy when a violation was found."""

    ok: bool
    violation: str | None = None

    def __bool__(self) -> bool:
        return self.ok


def validate_matching(g: BipartiteGraph, m: Matching) -> MatchingReport:
    """Check that m's edges all exist in g (disjointness is intrinsic to m)."""
    edge_set = g.edge_set()
    for a, b in m.sorted_edges():
        if a >= g.n_a or b >= g.n_b:
            return MatchingReport(False, f"edge ({a}, {b}) is out of range for {g!r}")
        if (a, b) not in edge_set:
            return MatchingReport(False, f"edge ({a}, {b}) is not an edge of the graph")
    return MatchingReport(True)


def is_maximal(g: BipartiteGraph, m: Matching) -> bool:
    """True iff no edge of g has both endpoints unmatched by m."""
    matched_a = np.zeros(g.n_a, dtype=bool)
    matched_b = np.zeros(g.n_b, dtype=bool)
    for a, b in m.sorted_edges():
        matched_a[a] = True
        matched_b[b] = True
    ea, eb = g.edge_arrays()
    if ea.size == 0:
        return True
    return not bool(np.any(~matched_a[ea] & ~matched_b[eb]))


def read_graph(path: str | os.PathLike[str] | io.TextIOBase) -> BipartiteGraph:
    """Parse the text format.

    Line 1 holds "<n_a> <n_b> <m>"; each of the following m lines holds
    one edge "<a> <b>" with 0-based indices.  Blank lines and lines
    starting with '#' are ignored.  File order is stream order.
    """
    if isinstance(path, io.TextIOBase):
        lines = path.read().splitlines()
        name = getattr(path, "name", "<stream>")
    else:
        name = os.fspath(path)
        with open(name, "r", encoding="utf-8") as fh:
            lines = fh.read().splitlines()

    rows: list[str] = []
    for lineno, raw in enumerate(lines, start=1):
        text = raw.strip()
        if not text or text.startswith("#"):
            continue
        rows.append(text)

    if not rows:
        raise GraphFormatError(f"{name}: missing header line")
    header = rows[0].split()
    if len(header) != 3:
        raise GraphFormatError(f"{name}: header must be '<n_a> <n_b> <m>', got {rows[0]!r}")
    try:
        n_a, n_b, m = (int(tok) for tok in header)
    except ValueError as exc:
        raise GraphFormatError(f"{name}: non-integer header field in {rows[0]!r}") from exc
    if n_a < 0 or n_b < 0 or m < 0:
        raise GraphFormatError(f"{name}: header fields must be non-negative")
    if len(rows) - 1 != m:
        raise GraphFormatError(f"{name}: header announces {m} edges but file has {len(rows) - 1}")

    ea = np.empty(m, dtype=np.int64)
    eb = np.empty(m, dtype=np.int64)
    for i, text in enumerate(rows[1:]):
        parts = text.split()
        if len(parts) != 2:
            raise GraphFormatError(f"{name}: edge line must be '<a> <b>', got {text!r}")
        try:
            ea[i] = int(parts[0])
            eb[i] = int(parts[1])
        except ValueError as exc:
            raise GraphFormatError(f"{name}: non-integer edge endpoint in {text!r}") from exc

    try:
        return BipartiteGraph(n_a, n_b, (ea, eb))
    except ValueError as exc:
        raise GraphFormatError(f"{name}: {exc}") from exc


def write_graph(path: str | os.PathLike[str], g: BipartiteGraph, comment: str | None = None) -> None:
    """Write g in the text format, preserving its edge order."""
    ea, eb = g.edge_arrays()
    with open(os.fspath(path), "w", encoding="utf-8") as fh:
        if comment:
            for line in comment.splitlines():
                fh.write(f"# {line}\n")
        fh.write(f"{g.n_a} {g.n_b} {g.num_edges}\n")
        _write_edge_arrays(fh, ea, eb)


def _write_edge_arrays(fh: io.TextIOBase, ea: np.ndarray, eb: np.ndarray) -> None:
    # chunked savetxt keeps memory flat for very long edge lists
    step = 1 << 20
    for lo in range(0, ea.size, step):
        hi = min(lo + step, ea.size)
        np.savetxt(fh, np.column_stack((ea[lo:hi], eb[lo:hi])), fmt="%d")
