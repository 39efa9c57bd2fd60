"""Sliding-window graph algorithms assembled from the histogram and estimators.

==================  ==================  ===========  ============================
name                estimator           (c, d, C)    ratio to truth
==================  ==================  ===========  ============================
mm_via_goodedges    E*_alpha tracker    (1, 2, 1)    2(a+2)(1+e)^2/(1-e)^2 on m
mm_squared          E*_alpha tracker    (1, 2, a+2)  2(a+2)^2(1+e)^2/(1-e)^2 on m
vc_forest           E*_1 tracker        (1, 2, 1)    4(1+e)^2/(1-e)^2 on VC
vc_approx           greedy matching     (2, 2, 1)    4(1+2e) on VC (cover size)
generic             item count          (1, 1, 1)    (1+e)^2/(1-e)^2 on count
==================  ==================  ===========  ============================

For ``mm_via_goodedges`` and ``vc_forest`` the tracker is exact for ``E*``,
so the histogram runs with ``C = 1`` and the ``alpha + 2`` (or 2 on forests)
gap between ``E*`` and the target enters only the reported bound.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

from .graph_streams import AlphaGoodTracker, GreedyMatching
from .histogram import (
    ConfigError,
    CountEstimator,
    DoublingWrapper,
    HistogramConfig,
    SlidingHistogram,
)

ALGORITHMS = ("mm_via_goodedges", "mm_squared", "vc_forest", "vc_approx", "generic")

# what each algorithm's estimate is compared against
TARGET = {
    "mm_via_goodedges": "m",
    "mm_squared": "m",
    "vc_forest": "vc",
    "vc_approx": "vc",
    "generic": "count",
}


@dataclass(frozen=True)
class WindowAlgorithmSpec:
    name: str
    epsilon: float
    window: int
    alpha: int = 1

    def __post_init__(self):
        if self.name not in ALGORITHMS:
            raise ConfigError(f"unknown algorithm {self.name!r}; expected one of {ALGORITHMS}")
        if int(self.alpha) != self.alpha or self.alpha < 1:
            raise ConfigError(f"alpha must be a positive integer, got {self.alpha}")
        if self.name == "vc_forest" and self.alpha != 1:
            raise ConfigError("vc_forest is defined for alpha = 1 only")
        # validates epsilon and window
        self.histogram_config()

    def constants(self) -> tuple[float, float, float]:
        """``(c, d, C)`` handed to the histogram."""
        if self.name == "mm_squared":
            return 1.0, 2.0, float(self.alpha + 2)
        if self.name == "vc_approx":
            return 2.0, 2.0, 1.0
        if self.name == "generic":
            return 1.0, 1.0, 1.0
        return 1.0, 2.0, 1.0

    def histogram_config(self) -> HistogramConfig:
        c, d, C = self.constants()
        return HistogramConfig(self.epsilon, self.window, c=c, d=d, C=C)

    def make_estimator(self):
        if self.name in ("mm_via_goodedges", "mm_squared", "vc_forest"):
            return AlphaGoodTracker(self.alpha)
        if self.name == "vc_approx":
            return GreedyMatching()
        return CountEstimator()


def ratio_bounds(spec: WindowAlgorithmSpec) -> tuple[float, float]:
    """``(low, high)`` such that ``low <= estimate / truth <= high`` at every query."""
    e = spec.epsilon
    a = spec.alpha
    slack = (1 + e) ** 2 / (1 - e) ** 2
    if spec.name == "mm_via_goodedges":
        return 1.0, 2 * (a + 2) * slack
    if spec.name == "mm_squared":
        return 1.0, 2 * (a + 2) ** 2 * slack
    if spec.name == "vc_forest":
        return 1.0, 4 * slack
    if spec.name == "vc_approx":
        return 1.0, 4 * (1 + 2 * e)
    return 1.0, slack


class WindowAlgorithm:
    """One running instance of a named sliding-window algorithm."""

    def __init__(self, spec: WindowAlgorithmSpec, doubling: bool = False):
        self.spec = spec
        config = spec.histogram_config()

        def make_hist():
            return SlidingHistogram(config, spec.make_estimator)

        self._front = DoublingWrapper(make_hist, spec.window) if doubling else make_hist()

    @property
    def histogram(self) -> SlidingHistogram:
        """The histogram currently answering queries."""
        front = self._front
        return front.active if isinstance(front, DoublingWrapper) else front

    @property
    def t(self) -> int:
        return self._front.t

    def update(self, edge) -> None:
        self._front.update(edge)

    def query(self) -> float:
        if self.spec.name == "vc_approx":
            return float(self.query_cover()[1])
        return float(self.histogram.query())

    def query_cover(self) -> tuple[frozenset, int]:
        """Vertex cover of the window from the greedy matching on ``B_1`` (vc_approx only)."""
        if self.spec.name != "vc_approx":
            raise ConfigError("only vc_approx reports a vertex cover")
        b1 = self.histogram.buckets[0] if self.histogram.buckets else None
        if b1 is None:
            self.histogram.covers_window_exactly()  # raises EmptyStateError
        cover = b1.estimator.cover()
        return cover, len(cover)

    def bucket_count(self) -> int:
        return self._front.bucket_count()

    def footprint(self) -> int:
        return self._front.footprint()


def _estimates(spec: WindowAlgorithmSpec, stream: Iterable, doubling: bool) -> Iterator[float]:
    alg = WindowAlgorithm(spec, doubling=doubling)
    for e in stream:
        alg.update(e)
        yield alg.query()


def mm_estimate_via_goodedges(spec: WindowAlgorithmSpec, stream: Iterable, doubling: bool = False) -> Iterator[float]:
    if spec.name != "mm_via_goodedges":
        raise ConfigError("spec must name mm_via_goodedges")
    return _estimates(spec, stream, doubling)


def mm_estimate_squared(spec: WindowAlgorithmSpec, stream: Iterable, doubling: bool = False) -> Iterator[float]:
    if spec.name != "mm_squared":
        raise ConfigError("spec must name mm_squared")
    return _estimates(spec, stream, doubling)


def vc_estimate_forest(spec: WindowAlgorithmSpec, stream: Iterable, doubling: bool = False) -> Iterator[float]:
    if spec.name != "vc_forest":
        raise ConfigError("spec must name vc_forest")
    return _estimates(spec, stream, doubling)


def _covers(spec: WindowAlgorithmSpec, stream: Iterable, doubling: bool) -> Iterator[tuple[frozenset, int]]:
    alg = WindowAlgorithm(spec, doubling=doubling)
    for e in stream:
        alg.update(e)
        yield alg.query_cover()


def vc_approx(spec: WindowAlgorithmSpec, stream: Iterable, doubling: bool = False) -> Iterator[tuple[frozenset, int]]:
    if spec.name != "vc_approx":
        raise ConfigError("spec must name vc_approx")
    return _covers(spec, stream, doubling)
