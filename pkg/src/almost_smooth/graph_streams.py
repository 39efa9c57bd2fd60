"""Edge items and the insertion-only estimators plugged into the histogram."""

from __future__ import annotations

from collections import deque
from typing import Iterable, NamedTuple

import numpy as np

from . import kernels


class RejectedItemError(ValueError):
    """Stream item that is not a valid simple-graph edge."""


class CapacityError(RuntimeError):
    """Desk-scale limit of an exact computation exceeded."""


class EdgeItem(NamedTuple):
    """Undirected edge, stored with ``u < v``."""

    u: int
    v: int

    @classmethod
    def of(cls, u, v) -> "EdgeItem":
        u = int(u)
        v = int(v)
        if u == v:
            raise RejectedItemError(f"self-loop on vertex {u}")
        return cls(u, v) if u < v else cls(v, u)


def as_edges(pairs: Iterable) -> list[EdgeItem]:
    return [EdgeItem.of(*p) for p in pairs]


def _edge(e) -> EdgeItem:
    if isinstance(e, EdgeItem):
        if e.u == e.v:
            raise RejectedItemError(f"self-loop on vertex {e.u}")
        return e if e.u < e.v else EdgeItem(e.v, e.u)
    return EdgeItem.of(*e)


class GreedyMatching:
    """Greedy maximal matching: keep an edge iff both endpoints are free."""

    def __init__(self):
        self.matched_edges: list[EdgeItem] = []
        self.matched_vertices: set[int] = set()

    def ingest(self, e) -> None:
        e = _edge(e)
        if e.u in self.matched_vertices or e.v in self.matched_vertices:
            return
        self.matched_edges.append(e)
        self.matched_vertices.add(e.u)
        self.matched_vertices.add(e.v)

    @property
    def size(self) -> int:
        return len(self.matched_edges)

    def value(self) -> int:
        return len(self.matched_edges)

    def cover(self) -> frozenset[int]:
        """Endpoints of the matching; a vertex cover of every ingested edge."""
        return frozenset(self.matched_vertices)

    def footprint(self) -> int:
        return len(self.matched_edges)


def greedy_ingest(state: GreedyMatching, e) -> GreedyMatching:
    state.ingest(e)
    return state


def greedy_value(state: GreedyMatching) -> int:
    return state.value()


def greedy_cover(state: GreedyMatching) -> frozenset[int]:
    return state.cover()


class AlphaGoodTracker:
    """Exact online count of alpha-good edges and its running maximum ``E*_alpha``.

    An edge stays alpha-good while at most ``alpha`` later arrivals touch each of
    its endpoints. Each vertex keeps the arrival indices of its last
    ``alpha + 1`` incident edges; the oldest of those is the one a new arrival
    pushes over the limit.
    """

    def __init__(self, alpha: int):
        if int(alpha) != alpha or alpha < 1:
            raise ValueError(f"alpha must be a positive integer, got {alpha}")
        self.alpha = int(alpha)
        self.t = 0
        self.live: dict[int, EdgeItem] = {}
        self.recent: dict[int, deque] = {}
        self.running_max = 0

    def ingest(self, e) -> None:
        e = _edge(e)
        self.t += 1
        for x in e:
            q = self.recent.get(x)
            if q is None:
                q = self.recent[x] = deque(maxlen=self.alpha + 1)
            elif len(q) == self.alpha + 1:
                self.live.pop(q[0], None)
            q.append(self.t)
        self.live[self.t] = e
        if len(self.live) > self.running_max:
            self.running_max = len(self.live)

    @property
    def current_count(self) -> int:
        return len(self.live)

    def value(self) -> int:
        return self.running_max

    def footprint(self) -> int:
        return len(self.live) + sum(len(q) for q in self.recent.values())


def alphagood_ingest(state: AlphaGoodTracker, e) -> AlphaGoodTracker:
    state.ingest(e)
    return state


def alphagood_star(state: AlphaGoodTracker) -> int:
    return state.running_max


DEFAULT_EDGE_CAP = 2000


class ExactMatching:
    """Exact maximum-matching size of the distinct edges seen so far.

    Desk-scale only: raises :class:`CapacityError` past ``cap`` distinct edges.
    A witness matching is kept so most arrivals are settled without a search.
    """

    def __init__(self, cap: int = DEFAULT_EDGE_CAP):
        self.cap = cap
        self.edges: set[EdgeItem] = set()
        self._index: dict[int, int] = {}
        self._us: list[int] = []
        self._vs: list[int] = []
        self._mate: dict[int, int] = {}
        self.size = 0

    def _vid(self, x: int) -> int:
        i = self._index.get(x)
        if i is None:
            i = self._index[x] = len(self._index)
        return i

    def ingest(self, e) -> None:
        e = _edge(e)
        if e in self.edges:
            return
        if len(self.edges) >= self.cap:
            raise CapacityError(f"exact matching limited to {self.cap} distinct edges")
        self.edges.add(e)
        a, b = self._vid(e.u), self._vid(e.v)
        self._us.append(a)
        self._vs.append(b)
        if a not in self._mate and b not in self._mate:
            self._mate[a] = b
            self._mate[b] = a
            self.size += 1
            return
        # one new edge raises m by at most one
        size, pairs = kernels.max_matching_bb(
            len(self._index), np.array(self._us), np.array(self._vs), lower=self.size
        )
        if pairs is not None:
            self.size = size
            self._mate = {}
            for x, y in pairs.tolist():
                self._mate[x] = y
                self._mate[y] = x

    def value(self) -> int:
        return self.size

    def footprint(self) -> int:
        return len(self.edges)


def exact_m_ingest(state: ExactMatching, e) -> ExactMatching:
    state.ingest(e)
    return state


def exact_m_value(state: ExactMatching) -> int:
    return state.value()
