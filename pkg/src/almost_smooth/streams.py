"""Edge-stream generators and the plain-text stream file format.

File layout::

    n <N> len <L>
    u v
    ...            (L lines, one edge each)
"""

from __future__ import annotations

import io
import os
from typing import Iterable, NamedTuple, TextIO

import numpy as np

from .graph_streams import EdgeItem


class GenerationError(ValueError):
    pass


class StreamFormatError(ValueError):
    pass


class ThreePaths(NamedTuple):
    stream: list[EdgeItem]
    boundaries: tuple[int, int, int, int]  # A = [0, b1), B = [b1, b2), C = [b2, b3)
    n: int


def gen_three_paths(n_copies: int) -> ThreePaths:
    """``n_copies`` vertex-disjoint paths x-y-z-w; all xy edges, then all yz, then all zw."""
    if n_copies < 1:
        raise GenerationError("n_copies must be >= 1")
    a, b, c = [], [], []
    for k in range(n_copies):
        x, y, z, w = 4 * k + 1, 4 * k + 2, 4 * k + 3, 4 * k + 4
        a.append(EdgeItem(x, y))
        b.append(EdgeItem(y, z))
        c.append(EdgeItem(z, w))
    return ThreePaths(a + b + c, (0, n_copies, 2 * n_copies, 3 * n_copies), 4 * n_copies)


def _random_tree_edges(rng: np.random.Generator, n: int) -> list[EdgeItem]:
    # attach every vertex of a random order to a uniformly chosen earlier one
    order = rng.permutation(n) + 1
    edges = []
    for i in range(1, n):
        parent = order[rng.integers(0, i)]
        edges.append(EdgeItem.of(order[i], parent))
    return edges


def _sample(rng, edges, k):
    pick = rng.choice(len(edges), size=k, replace=False)
    return [edges[i] for i in pick]


def gen_forest(n: int, edge_count: int, seed: int) -> list[EdgeItem]:
    """Random forest on vertices ``1..n`` with ``edge_count`` edges, random arrival order."""
    if n < 1 or edge_count < 0 or edge_count > n - 1:
        raise GenerationError(f"a forest on {n} vertices has at most {max(n - 1, 0)} edges")
    rng = np.random.default_rng(seed)
    return _sample(rng, _random_tree_edges(rng, n), edge_count)


def gen_alpha_union(n: int, alpha: int, edge_count: int, seed: int) -> list[EdgeItem]:
    """Distinct edges drawn from the union of ``alpha`` random spanning trees (arboricity <= alpha)."""
    if n < 2 or alpha < 1 or edge_count < 0:
        raise GenerationError("need n >= 2, alpha >= 1, edge_count >= 0")
    rng = np.random.default_rng(seed)
    pool: dict[EdgeItem, None] = {}
    for _ in range(alpha):
        for e in _random_tree_edges(rng, n):
            pool[e] = None
    pool_edges = list(pool)
    if edge_count > len(pool_edges):
        raise GenerationError(f"only {len(pool_edges)} distinct edges in the union, asked for {edge_count}")
    return _sample(rng, pool_edges, edge_count)


def gen_gnp(n: int, p: float, seed: int) -> list[EdgeItem]:
    """Erdos-Renyi G(n, p) edges in uniformly random order."""
    if n < 1 or not (0.0 <= p <= 1.0):
        raise GenerationError("need n >= 1 and 0 <= p <= 1")
    rng = np.random.default_rng(seed)
    iu, ju = np.triu_indices(n, k=1)
    keep = rng.random(iu.shape[0]) < p
    edges = [EdgeItem(int(a) + 1, int(b) + 1) for a, b in zip(iu[keep], ju[keep])]
    return [edges[i] for i in rng.permutation(len(edges))]


def gen_matching(k: int) -> list[EdgeItem]:
    """``k`` vertex-disjoint edges."""
    return [EdgeItem(2 * i + 1, 2 * i + 2) for i in range(k)]


def gen_star(leaves: int) -> list[EdgeItem]:
    return [EdgeItem(1, i + 2) for i in range(leaves)]


# --------------------------------------------------------------------------
# file format


def write_stream(target, stream: Iterable, n: int) -> None:
    """Write ``stream`` to a path or text handle."""
    edges = [EdgeItem.of(*e) for e in stream]
    lines = [f"n {n} len {len(edges)}\n"] + [f"{e.u} {e.v}\n" for e in edges]
    if isinstance(target, (str, os.PathLike)):
        with open(target, "w", encoding="ascii", newline="\n") as fh:
            fh.writelines(lines)
    else:
        target.writelines(lines)


def emit_stream(stream: Iterable, n: int) -> str:
    buf = io.StringIO()
    write_stream(buf, stream, n)
    return buf.getvalue()


def _parse(fh: TextIO) -> tuple[int, list[EdgeItem]]:
    header = fh.readline().split()
    if len(header) != 4 or header[0] != "n" or header[2] != "len":
        raise StreamFormatError(f"bad header {' '.join(header)!r}; expected 'n <N> len <L>'")
    try:
        n, length = int(header[1]), int(header[3])
    except ValueError as exc:
        raise StreamFormatError(f"bad header numbers: {exc}") from None
    edges = []
    for lineno, line in enumerate(fh, start=2):
        if not line.strip():
            continue
        parts = line.split()
        if len(parts) != 2:
            raise StreamFormatError(f"line {lineno}: expected 'u v', got {line.strip()!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
            e = EdgeItem.of(u, v)
        except ValueError as exc:
            raise StreamFormatError(f"line {lineno}: {exc}") from None
        if not (1 <= e.u and e.v <= n):
            raise StreamFormatError(f"line {lineno}: vertex outside 1..{n}")
        edges.append(e)
    if len(edges) != length:
        raise StreamFormatError(f"header announces {length} edges, found {len(edges)}")
    return n, edges


def read_stream(source) -> tuple[int, list[EdgeItem]]:
    """Parse a stream file (path or text handle) into ``(n, edges)``."""
    if isinstance(source, (str, os.PathLike)):
        with open(source, encoding="ascii") as fh:
            return _parse(fh)
    return _parse(source)


def parse_stream(text: str) -> tuple[int, list[EdgeItem]]:
    return _parse(io.StringIO(text))
