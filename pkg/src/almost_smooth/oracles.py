"""Brute-force ground truth and split-based property checkers."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import numpy as np

from . import kernels
from .graph_streams import DEFAULT_EDGE_CAP, CapacityError, EdgeItem, GreedyMatching, _edge

MAX_COVER = 40
MAX_ESTAR_STREAM = 10_000


@dataclass(frozen=True)
class GraphSnapshot:
    """Simple graph: distinct edges, no self-loops."""

    edges: frozenset
    vertex_count_hint: int | None = None

    @classmethod
    def from_stream(cls, stream: Iterable, vertex_count_hint: int | None = None) -> "GraphSnapshot":
        return cls(frozenset(_edge(e) for e in stream), vertex_count_hint)


def _snapshot(g) -> GraphSnapshot:
    return g if isinstance(g, GraphSnapshot) else GraphSnapshot.from_stream(g)


def _relabel(edges: Sequence[EdgeItem]):
    if not edges:
        empty = np.zeros(0, dtype=np.int64)
        return empty, empty, empty
    flat = np.array(edges, dtype=np.int64)
    labels, inv = np.unique(flat, return_inverse=True)
    inv = inv.reshape(flat.shape)
    return labels, inv[:, 0], inv[:, 1]


def max_matching_exact(g, cap: int = DEFAULT_EDGE_CAP) -> tuple[int, list[EdgeItem]]:
    """Maximum matching by branch and bound; the witness is checked before returning."""
    g = _snapshot(g)
    if len(g.edges) > cap:
        raise CapacityError(f"exact matching limited to {cap} edges, got {len(g.edges)}")
    edges = sorted(g.edges)
    labels, us, vs = _relabel(edges)
    size, pairs = kernels.max_matching_bb(len(labels), us, vs)
    matching = [EdgeItem.of(labels[a], labels[b]) for a, b in pairs.tolist()]
    touched = [x for e in matching for x in e]
    assert len(set(touched)) == len(touched), "witness is not a matching"
    assert all(e in g.edges for e in matching), "witness uses a non-edge"
    return size, matching


def min_vertex_cover_exact(g, cap: int = DEFAULT_EDGE_CAP, max_cover: int = MAX_COVER) -> tuple[int, frozenset]:
    g = _snapshot(g)
    if len(g.edges) > cap:
        raise CapacityError(f"exact vertex cover limited to {cap} edges, got {len(g.edges)}")
    edges = sorted(g.edges)
    greedy = GreedyMatching()
    for e in edges:
        greedy.ingest(e)
    if greedy.size > max_cover:
        raise CapacityError(f"vertex cover exceeds the branching cap of {max_cover}")
    labels, us, vs = _relabel(edges)
    size, idx = kernels.min_cover_bb(len(labels), us, vs)
    if size > max_cover:
        raise CapacityError(f"vertex cover {size} exceeds the branching cap of {max_cover}")
    cover = frozenset(int(labels[i]) for i in idx.tolist())
    assert all(e.u in cover or e.v in cover for e in edges), "witness does not cover"
    return size, cover


def _stream_arrays(stream: Sequence):
    edges = [_edge(e) for e in stream]
    return _relabel(edges)


def alpha_good_prefix_counts(stream: Sequence, alpha: int) -> np.ndarray:
    """``|E_alpha(S_t)|`` for ``t = 1..len(stream)``, straight from the definition."""
    if len(stream) > MAX_ESTAR_STREAM:
        raise CapacityError(f"E* oracle limited to {MAX_ESTAR_STREAM} items, got {len(stream)}")
    _, us, vs = _stream_arrays(stream)
    return kernels.alpha_good_counts(us, vs, alpha)


def e_star_exact(stream: Sequence, alpha: int) -> int:
    counts = alpha_good_prefix_counts(stream, alpha)
    return int(counts.max()) if counts.size else 0


def matching_size(stream: Sequence) -> int:
    return max_matching_exact(GraphSnapshot.from_stream(stream))[0]


def cover_size(stream: Sequence) -> int:
    return min_vertex_cover_exact(GraphSnapshot.from_stream(stream))[0]


def greedy_size(stream: Sequence) -> int:
    g = GreedyMatching()
    for e in stream:
        g.ingest(e)
    return g.size


def e_star_fn(alpha: int) -> Callable[[Sequence], int]:
    def f(stream):
        return e_star_exact(stream, alpha)

    f.__name__ = f"e_star_{alpha}"
    return f


PROBLEMS = ("m", "vc", "estar")


def window_items(stream: Sequence, w: int, t: int) -> list:
    if not (1 <= t <= len(stream)):
        raise IndexError(f"time {t} outside 1..{len(stream)}")
    return list(stream[max(0, t - w) : t])


def window_truth(stream: Sequence, w: int, t: int, problem: str, alpha: int = 1) -> int:
    """Exact value of ``problem`` on the window of the last ``w`` items at time ``t``."""
    items = window_items(stream, w, t)
    if problem == "m":
        return matching_size(items)
    if problem == "vc":
        return cover_size(items)
    if problem == "estar":
        return e_star_exact(items, alpha)
    raise ValueError(f"unknown problem {problem!r}; expected one of {PROBLEMS}")


# --------------------------------------------------------------------------
# split checkers


@dataclass
class SplitReport:
    splits: tuple
    values: dict = field(default_factory=dict)
    violated: bool = False
    witness: str | None = None
    failed: tuple = ()  # names of the checks that failed on this split


def _two_way(rng: random.Random, L: int):
    lo = rng.randrange(0, L - 1)
    hi = rng.randrange(lo + 2, L + 1)
    p = rng.randrange(lo + 1, hi)
    return lo, p, hi


def check_subadditive(f, stream: Sequence, trials: int, rng_seed: int = 0, splits=None) -> list[SplitReport]:
    """Test ``f(AB) <= f(A) + f(B)`` on random adjacent segments ``A``, ``B``."""
    stream = list(stream)
    rng = random.Random(rng_seed)
    reports = []
    if splits is None:
        splits = [_two_way(rng, len(stream)) for _ in range(trials)] if len(stream) >= 2 else []
    for lo, p, hi in splits:
        A, B = stream[lo:p], stream[p:hi]
        fa, fb, fab = f(A), f(B), f(A + B)
        rep = SplitReport((lo, p, hi), {"A": fa, "B": fb, "AB": fab})
        if fab > fa + fb:
            rep.violated = True
            rep.witness = f"f(AB)={fab} > f(A)+f(B)={fa}+{fb}"
        reports.append(rep)
    return reports


EPS_GRID = tuple(Fraction(k, 20) for k in range(1, 20))


def _three_way(rng: random.Random, L: int):
    lo = rng.randrange(0, L - 2)
    hi = rng.randrange(lo + 3, L + 1)
    p = rng.randrange(lo + 1, hi - 1)
    q = rng.randrange(p + 1, hi)
    return lo, p, q, hi


ALMOST_SMOOTH_FORMS = ("left", "ratio", "implication")


def check_almost_smooth(f, c, d, stream: Sequence, trials: int, rng_seed: int = 0,
                        splits=None, grid=EPS_GRID, forms=ALMOST_SMOOTH_FORMS) -> list[SplitReport]:
    """Test c-left-monotonicity and d-almost-smoothness on random splits.

    Three checks, selectable through ``forms``:

    * ``left``: ``f(B) <= c f(AB)``;
    * ``ratio``: ``f(B) f(ABC) <= d f(BC) f(AB)`` in exact arithmetic;
    * ``implication``: ``eps f(AB) <= f(B)`` implies ``eps f(ABC) <= d f(BC)``
      for every ``eps`` on ``grid``.

    For ``c == 1`` the ratio and implication forms agree. For ``c > 1`` the
    ratio form is stronger: ``f(B) / f(AB)`` may exceed 1 while the grid stays
    below 1. Splits with ``f(AB) == 0`` or ``f(ABC) == 0`` are exempt from the
    ratio check.
    """
    unknown = set(forms) - set(ALMOST_SMOOTH_FORMS)
    if unknown:
        raise ValueError(f"unknown checks {sorted(unknown)}")
    stream = list(stream)
    c = Fraction(c).limit_denominator(10**6)
    d = Fraction(d).limit_denominator(10**6)
    rng = random.Random(rng_seed)
    if splits is None:
        splits = [_three_way(rng, len(stream)) for _ in range(trials)] if len(stream) >= 3 else []
    reports = []
    for lo, p, q, hi in splits:
        A, B, C = stream[lo:p], stream[p:q], stream[q:hi]
        fb, fab, fbc, fabc = f(B), f(A + B), f(B + C), f(A + B + C)
        rep = SplitReport((lo, p, q, hi), {"B": fb, "AB": fab, "BC": fbc, "ABC": fabc})
        notes = []
        if "left" in forms and fb > c * fab:
            notes.append(("left", f"left-monotone: f(B)={fb} > {c}*f(AB)={c * fab}"))
        if "ratio" in forms and fab != 0 and fabc != 0 and fb * fabc > d * fbc * fab:
            notes.append(("ratio", f"ratio: f(B)*f(ABC)={fb * fabc} > {d}*f(BC)*f(AB)={d * fbc * fab}"))
        if "implication" in forms:
            for eps in grid:
                if eps * fab <= fb and eps * fabc > d * fbc:
                    notes.append(("implication", f"implication fails at eps={eps}"))
                    break
        if notes:
            rep.violated = True
            rep.failed = tuple(k for k, _ in notes)
            rep.witness = "; ".join(w for _, w in notes)
        reports.append(rep)
    return reports


def violations(reports: Iterable[SplitReport], kind: str | None = None) -> list[SplitReport]:
    """Violated splits, optionally only those failing the check named ``kind``."""
    if kind is None:
        return [r for r in reports if r.violated]
    return [r for r in reports if kind in r.failed]


def is_forest(edges: Iterable) -> bool:
    """Union-find acyclicity check on the distinct edges."""
    parent: dict[int, int] = {}

    def find(x):
        parent.setdefault(x, x)
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in set(_edge(e) for e in edges):
        a, b = find(e.u), find(e.v)
        if a == b:
            return False
        parent[a] = b
    return True


def covers(cover: Iterable[int], edges: Iterable) -> bool:
    cs = set(cover)
    return all(e[0] in cs or e[1] in cs for e in edges)
