import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from almost_smooth import oracles, streams
from almost_smooth.graph_streams import ExactMatching, GreedyMatching
from almost_smooth.histogram import (
    ConfigError,
    CountEstimator,
    EmptyStateError,
    HistogramConfig,
    SlidingHistogram,
    bucket_bound,
    new_histogram,
    query_multiplier,
    wrap_doubling,
)

# Hand simulation of the update procedure with the count estimator,
# epsilon = 0.5, w = 4; (start, value) per bucket after each of 8 items.
GOLDEN_TRACE = [
    [(1, 1)],
    [(1, 2), (2, 1)],
    [(1, 3), (2, 2), (3, 1)],
    [(1, 4), (2, 3), (3, 2), (4, 1)],
    [(1, 5), (3, 3), (4, 2), (5, 1)],
    [(3, 4), (4, 3), (5, 2), (6, 1)],
    [(3, 5), (5, 3), (6, 2), (7, 1)],
    [(5, 4), (6, 3), (7, 2), (8, 1)],
]


def reference_starts(n_items, eps, w):
    """Bucket start lists for the count function, following the update steps literally.

    Values are recomputed from the definition (items since start) rather than
    cached, and indices are 1-based as in the pseudo-code.
    """
    starts = []
    trace = []
    for t in range(1, n_items + 1):
        starts = starts + [t]
        val = lambda s: t - s + 1  # noqa: E731
        i = 1
        while i <= len(starts) - 2:
            vi = val(starts[i - 1])
            close = [jj for jj in range(i, len(starts) + 1) if val(starts[jj - 1]) > (1 - eps) * vi]
            j = max(close) if close else i
            if j > i + 1:
                starts = starts[:i] + starts[j - 1 :]
            i += 1
        if len(starts) >= 2 and starts[1] <= t - w + 1:
            starts = starts[1:]
        trace.append([(s, t - s + 1) for s in starts])
    return trace


def count_hist(eps, w, **kw):
    return new_histogram(HistogramConfig(eps, w, **kw), CountEstimator)


# -- configuration ---------------------------------------------------------


def test_new_histogram_is_empty():
    h = count_hist(0.1, 4, c=1, d=2, C=1)
    assert h.bucket_count() == 0 and h.t == 0 and h.footprint() == 0


@pytest.mark.parametrize(
    "kw",
    [
        dict(epsilon=0.6, window=4),
        dict(epsilon=0.0, window=4),
        dict(epsilon=-0.1, window=4),
        dict(epsilon=0.1, window=0),
        dict(epsilon=0.1, window=2.5),
        dict(epsilon=0.1, window=4, c=0.5),
        dict(epsilon=0.1, window=4, d=0.9),
        dict(epsilon=0.1, window=4, C=0),
    ],
)
def test_invalid_config(kw):
    with pytest.raises(ConfigError):
        HistogramConfig(**kw)


def test_window_of_one_item_accepted():
    h = count_hist(0.25, 1)
    for _ in range(5):
        h.update(None)
        assert h.query() == 1


@pytest.mark.parametrize(
    "c,d,C,eps,expected",
    [
        (1, 1, 1, 1e-9, 1.000000003),
        (1, 2, 1, 0.1, 2.7160493827160495),
        (2, 2, 3, 0.25, 26.666666666666668),
    ],
)
def test_query_multiplier(c, d, C, eps, expected):
    assert query_multiplier(HistogramConfig(eps, 4, c=c, d=d, C=C)) == pytest.approx(expected, rel=1e-9)


# -- update ----------------------------------------------------------------


def test_first_item_opens_one_bucket():
    h = count_hist(0.1, 4)
    h.update("a")
    assert h.snapshot() == [(1, 1)]
    assert h.query() == 1


def test_golden_trace_matches_reference():
    assert reference_starts(8, 0.5, 4) == GOLDEN_TRACE


def test_golden_trace():
    h = count_hist(0.5, 4, d=1)
    for t in range(8):
        h.update(t)
        assert h.snapshot() == GOLDEN_TRACE[t]


@pytest.mark.parametrize("eps", [0.1, 0.25, 0.5])
@pytest.mark.parametrize("w", [1, 3, 7, 16])
def test_count_trace_matches_reference(eps, w):
    h = count_hist(eps, w)
    ref = reference_starts(60, eps, w)
    for t in range(60):
        h.update(t)
        assert h.snapshot() == ref[t]


class ZeroEstimator:
    def ingest(self, item):
        pass

    def value(self):
        return 0

    def footprint(self):
        return 0


def test_all_zero_estimator_only_trims_by_window():
    h = new_histogram(HistogramConfig(0.1, 4), ZeroEstimator)
    for t in range(1, 11):
        h.update(t)
        # nothing merges; only buckets fully behind the window go
        expected = list(range(max(1, t - 4 + 1), t + 1))
        assert [s for s, _ in h.snapshot()] == expected
        assert h.query() == 0


def test_query_on_empty_histogram():
    with pytest.raises(EmptyStateError):
        count_hist(0.1, 4).query()


def test_query_first_branch_returns_b1():
    class Fixed:
        def __init__(self):
            self.v = 7

        def ingest(self, item):
            pass

        def value(self):
            return self.v

        def footprint(self):
            return 1

    h = new_histogram(HistogramConfig(0.1, 4), Fixed)
    h.update(0)
    assert h.covers_window_exactly() and h.query() == 7


def test_query_else_branch_scales_b2():
    h = count_hist(0.1, 60, c=1, d=2, C=1)
    fired = 0
    for t in range(200):
        h.update(t)
        if not h.covers_window_exactly():
            fired += 1
            assert h.query() == 2 * 1.1 / 0.81 * h.buckets[1].value
    assert fired > 0


def test_bucket_count_and_footprint():
    h = count_hist(0.5, 16)
    assert h.bucket_count() == 0
    h.update(0)
    assert h.bucket_count() == 1
    assert h.footprint() == 2
    for t in range(1, 64):
        h.update(t)
        assert h.bucket_count() <= 12


def test_determinism():
    rng = random.Random(3)
    edges = streams.gen_alpha_union(30, 2, 50, 3)

    def run():
        h = new_histogram(HistogramConfig(0.1, 20, c=2), GreedyMatching)
        out = []
        for e in edges:
            h.update(e)
            out.append((h.snapshot(), h.query()))
        return out

    assert run() == run()
    del rng


# -- invariants ------------------------------------------------------------


def check_invariants(h):
    starts = [b.start for b in h.buckets]
    assert starts == sorted(set(starts))
    assert starts[0] <= h.window_start
    if len(starts) >= 2:
        assert starts[1] > h.t - h.config.window + 1
    vals = [b.value for b in h.buckets]
    keep = 1 - h.config.epsilon
    for i in range(len(vals) - 2):
        if vals[i] > 0:
            assert vals[i + 2] <= keep * vals[i]


class SumEstimator:
    def __init__(self):
        self.s = 0

    def ingest(self, x):
        self.s += x

    def value(self):
        return self.s

    def footprint(self):
        return 1


@settings(max_examples=150, deadline=None)
@given(
    items=st.lists(st.integers(1, 20), min_size=1, max_size=120),
    eps=st.sampled_from([0.05, 0.1, 0.25, 0.5]),
    w=st.integers(1, 40),
)
def test_invariants_with_sum_estimator(items, eps, w):
    # positive items only: zero-valued buckets never merge (see the all-zero test)
    h = new_histogram(HistogramConfig(eps, w), SumEstimator)
    v_max = 0
    for x in items:
        h.update(x)
        check_invariants(h)
        v_max = max(v_max, max(b.value for b in h.buckets))
        assert h.bucket_count() <= bucket_bound(v_max, eps)


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 10**6), eps=st.sampled_from([0.1, 0.25]), w=st.integers(2, 40))
def test_invariants_with_greedy_estimator(seed, eps, w):
    # greedy matching size is not monotone in the suffix; the invariants still hold
    rng = random.Random(seed)
    h = new_histogram(HistogramConfig(eps, w, c=2), GreedyMatching)
    for _ in range(80):
        u, v = rng.sample(range(1, 15), 2)
        h.update((u, v))
        check_invariants(h)


def test_sandwich_with_exact_matching_on_forest():
    edges = streams.gen_forest(30, 29, 11)
    edges = edges + streams.gen_forest(30, 29, 12) + streams.gen_forest(30, 29, 13)
    eps, w = 0.1, 50
    cfg = HistogramConfig(eps, w, c=1, d=2, C=1)
    h = new_histogram(cfg, ExactMatching)
    hi = 2 * (1 + eps) ** 2 / (1 - eps) ** 2
    for t, e in enumerate(edges, start=1):
        h.update(e)
        truth = oracles.window_truth(edges, w, t, "m")
        out = h.query()
        assert truth <= out <= hi * truth
        if not h.covers_window_exactly():
            assert h.buckets[1].value / (cfg.c * (1 + eps)) <= truth


def test_bucket_bound_formula():
    assert bucket_bound(16, 0.5) == 2 * math.ceil(math.log(17) / math.log(2)) + 4


# -- doubling --------------------------------------------------------------


def test_doubling_routes_to_penultimate_segment():
    d = wrap_doubling(lambda: count_hist(0.25, 3), 3)
    starts = []
    for t in range(1, 8):
        d.update(t)
        starts.append([s for s, _ in d.instances])
        assert len(d.instances) <= 2
    assert [s for s, _ in d.instances] == [4, 7]
    assert d.active_start == 4
    assert starts[0] == [1] and starts[2] == [1]


def test_doubling_before_first_item():
    d = wrap_doubling(lambda: count_hist(0.25, 3), 3)
    with pytest.raises(EmptyStateError):
        d.query()


def test_doubling_early_times_use_first_instance():
    d = wrap_doubling(lambda: count_hist(0.25, 5), 5)
    for t in range(1, 6):
        d.update(t)
        assert d.active_start == 1


def test_doubling_matches_guarantee():
    eps, w = 0.1, 10
    plain = count_hist(eps, w, d=1)
    wrapped = wrap_doubling(lambda: count_hist(eps, w, d=1), w)
    hi = (1 + eps) ** 2 / (1 - eps) ** 2
    for t in range(1, 101):
        plain.update(t)
        wrapped.update(t)
        truth = min(t, w)
        for out in (plain.query(), wrapped.query()):
            assert truth <= out <= hi * truth
        assert len(wrapped.instances) <= 2
        for s, inst in wrapped.instances:
            assert inst.t == t - s + 1 <= 2 * w
    assert wrapped.max_live == 2
