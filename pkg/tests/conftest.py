import random

import pytest

from almost_smooth import streams
from almost_smooth.graph_streams import EdgeItem

_ACCEPTANCE_LINES = []


@pytest.fixture
def acceptance_log():
    return _ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def random_pairs(rng: random.Random, n: int, length: int):
    """Edges drawn with replacement; repeats are allowed."""
    out = []
    while len(out) < length:
        u, v = rng.randint(1, n), rng.randint(1, n)
        if u != v:
            out.append((u, v))
    return out


def gnp_prefix(n: int, length: int, seed: int):
    """Roughly ``length`` distinct random edges on ``n`` vertices."""
    pairs = n * (n - 1) // 2
    p = min(1.0, 1.3 * length / max(pairs, 1))
    return streams.gen_gnp(n, p, seed)[:length]


def mixed_stream(rng: random.Random, n_max: int = 60, length_max: int = 400):
    """One of forest / alpha-union / gnp with random parameters."""
    kind = rng.choice(("forest", "union", "gnp"))
    n = rng.randint(6, n_max)
    seed = rng.randrange(2**31)
    if kind == "forest":
        return streams.gen_forest(n, rng.randint(1, n - 1), seed)
    if kind == "union":
        alpha = rng.randint(1, 3)
        want = rng.randint(1, min(alpha * (n - 1), length_max))
        while True:
            try:
                return streams.gen_alpha_union(n, alpha, want, seed)
            except streams.GenerationError:
                want -= 1
    return gnp_prefix(n, rng.randint(2, length_max), seed)


def forest_stream(n: int, copies: int, seed: int):
    """Spanning trees on ``n`` vertices, each on fresh labels, so every window is a forest."""
    out = []
    for k in range(copies):
        out += [EdgeItem(e.u + k * n, e.v + k * n) for e in streams.gen_forest(n, n - 1, seed * 1000 + k)]
    return out
