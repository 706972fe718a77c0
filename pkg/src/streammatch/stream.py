"""Replayable edge streams with pass counting and stored-edge accounting.

A stream never rewinds implicitly: every traversal begins with an
explicit start_pass() call, and passes_used increments only when the
traversal reaches the end of the edge sequence.  Abandoning a pass
midway leaves the stream in an error state on the next start_pass().

Edges travel in blocks of parallel (A-endpoints, B-endpoints) int64
arrays.  A block is only valid until the next block is requested;
consumers that retain edges must copy them.
"""

from __future__ import annotations

from collections.abc import Callable, Iterator
from typing import Protocol, runtime_checkable

import numpy as np

Block = tuple[np.ndarray, np.ndarray]


class StreamStateError(RuntimeError):
    """A pass was started while a previous pass was still in progress."""


@runtime_checkable
class Streamable(Protocol):
    """Anything that can replay its edge sequence as array blocks."""

    n_a: int
    n_b: int

    def stream_blocks(self) -> Iterator[Block]: ...


class SpaceAccountant:
    """Tracks the number of edges an algorithm currently retains.

    add/release move the current count; peak keeps the high-water mark.
    The unit is one stored edge, so bounds of the form "at most c(n_a +
    n_b) edges" can be checked directly against peak.
    """

    __slots__ = ("current", "peak")

    def __init__(self) -> None:
        self.current = 0
        self.peak = 0

    def add(self, k: int) -> None:
        if k < 0:
            raise ValueError("add() takes a non-negative count")
        self.current += int(k)
        if self.current > self.peak:
            self.peak = self.current

    def release(self, k: int) -> None:
        if k < 0:
            raise ValueError("release() takes a non-negative count")
        self.current -= int(k)
        if self.current < 0:
            raise ValueError("released more edges than currently held")

    def __repr__(self) -> str:
        return f"SpaceAccountant(current={self.current}, peak={self.peak})"


class StreamPass:
    """One sequential traversal of a stream's edge sequence."""

    def __init__(self, stream: "EdgeStream", blocks: Iterator[Block]):
        self._stream = stream
        self._blocks = blocks
        self._consumed = False

    def blocks(self) -> Iterator[Block]:
        """Yield edge blocks; exhausting the iterator completes the pass."""
        if self._consumed:
            raise StreamStateError("this pass has already been consumed")
        self._consumed = True
        for ea, eb in self._blocks:
            self._stream.position += int(ea.size)
            yield ea, eb
        self._stream._finish_pass()

    def edges(self) -> Iterator[tuple[int, int]]:
        """Yield edges one by one (copies; safe to retain)."""
        for ea, eb in self.blocks():
            yield from zip(ea.tolist(), eb.tolist())


class EdgeStream:
    """Replayable edge sequence over a fixed bipartite vertex set."""

    def __init__(self, n_a: int, n_b: int, block_factory: Callable[[], Iterator[Block]]):
        self.n_a = int(n_a)
        self.n_b = int(n_b)
        self._factory = block_factory
        self.passes_used = 0
        self.position = 0
        self._in_pass = False

    def start_pass(self) -> StreamPass:
        """Begin a traversal from the first edge."""
        if self._in_pass:
            raise StreamStateError(
                "a pass is already in progress; streams do not rewind implicitly"
            )
        self._in_pass = True
        self.position = 0
        return StreamPass(self, self._factory())

    def _finish_pass(self) -> None:
        self._in_pass = False
        self.passes_used += 1

    def __repr__(self) -> str:
        return (
            f"EdgeStream(n_a={self.n_a}, n_b={self.n_b}, "
            f"passes_used={self.passes_used}, in_pass={self._in_pass})"
        )


def open_stream(source: Streamable) -> EdgeStream:
    """Wrap a graph-like object (anything with n_a, n_b, stream_blocks)."""
    if not isinstance(source, Streamable):
        raise TypeError(f"cannot stream object of type {type(source).__name__}")
    return EdgeStream(source.n_a, source.n_b, source.stream_blocks)


def filtered_view(stream: EdgeStream, keep_a: np.ndarray, keep_b: np.ndarray) -> EdgeStream:
    """Sub-stream of edges whose endpoints fall in the kept vertex sets.

    keep_a/keep_b are boolean masks over the parent's two sides.  Each
    pass of the view drives one full pass of the parent, so the parent's
    pass budget is charged exactly once per traversal.  Relative edge
    order is preserved and kept edges appear exactly once.
    """
    keep_a = np.asarray(keep_a, dtype=bool)
    keep_b = np.asarray(keep_b, dtype=bool)
    if keep_a.shape != (stream.n_a,) or keep_b.shape != (stream.n_b,):
        raise ValueError("keep masks must cover the stream's vertex sides exactly")

    def factory() -> Iterator[Block]:
        for ea, eb in stream.start_pass().blocks():
            mask = keep_a[ea] & keep_b[eb]
            if mask.any():
                yield ea[mask], eb[mask]

    return EdgeStream(stream.n_a, stream.n_b, factory)
