"""Almost-smooth histogram over pluggable insertion-only estimators.

A :class:`SlidingHistogram` keeps a list of buckets, each a suffix of the
stream with its own estimator instance, nested as
``B_1 ⊇ W ⊋ B_2 ⊋ ... ⊋ B_k`` where ``W`` is the active window.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Callable, Protocol


class ConfigError(ValueError):
    """Invalid histogram or algorithm parameters."""


class EmptyStateError(RuntimeError):
    """Query issued before any item was processed."""


class Estimator(Protocol):
    def ingest(self, item: Any) -> None: ...

    def value(self) -> float: ...

    def footprint(self) -> int: ...


EstimatorFactory = Callable[[], Estimator]


@dataclass(frozen=True)
class HistogramConfig:
    """Parameters of one histogram.

    ``c`` and ``d`` are the almost-smoothness constants of the tracked
    function, ``C`` the approximation factor of the plugged estimator.
    ``delta`` is accepted for completeness; estimators here are deterministic
    so it plays no role at runtime.
    """

    epsilon: float
    window: int
    c: float = 1.0
    d: float = 2.0
    C: float = 1.0
    delta: float | None = None

    def __post_init__(self):
        if not (0.0 < self.epsilon <= 0.5):
            raise ConfigError(f"epsilon must lie in (0, 1/2], got {self.epsilon}")
        if int(self.window) != self.window or self.window < 1:
            raise ConfigError(f"window must be a positive integer, got {self.window}")
        for name in ("c", "d", "C"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be >= 1, got {getattr(self, name)}")
        if self.delta is not None and not (0.0 < self.delta < 0.5):
            raise ConfigError(f"delta must lie in (0, 1/2), got {self.delta}")


def query_multiplier(config: HistogramConfig) -> float:
    """Scale applied to ``B_2``'s value when ``B_1`` overhangs the window."""
    eps = config.epsilon
    return config.d * config.c * config.C * (1.0 + eps) / (1.0 - eps) ** 2


def bucket_bound(v_max: float, epsilon: float) -> int:
    """Ceiling on the bucket count for integer-valued estimators bounded by ``v_max``."""
    return 2 * math.ceil(math.log(v_max + 1) / math.log(1.0 / (1.0 - epsilon))) + 4


class Bucket:
    __slots__ = ("start", "estimator", "value")

    def __init__(self, start: int, estimator: Estimator):
        self.start = start
        self.estimator = estimator
        self.value = 0.0

    def ingest(self, item) -> None:
        self.estimator.ingest(item)
        self.value = self.estimator.value()

    def __repr__(self):
        return f"Bucket(start={self.start}, value={self.value})"


class SlidingHistogram:
    """Sliding-window wrapper turning an insertion-only estimator into a windowed one.

    Single-writer: calls to :meth:`update` and :meth:`query` must be serialised
    by the caller.
    """

    def __init__(self, config: HistogramConfig, factory: EstimatorFactory):
        self.config = config
        self.factory = factory
        self.buckets: list[Bucket] = []
        self.t = 0

    # -- state -------------------------------------------------------------

    @property
    def window_start(self) -> int:
        return max(1, self.t - self.config.window + 1)

    def bucket_count(self) -> int:
        return len(self.buckets)

    def footprint(self) -> int:
        # one start counter per bucket on top of the estimator state
        return sum(b.estimator.footprint() + 1 for b in self.buckets)

    def snapshot(self) -> list[tuple[int, float]]:
        return [(b.start, b.value) for b in self.buckets]

    # -- stream ------------------------------------------------------------

    def update(self, item) -> None:
        self.t += 1
        for b in self.buckets:
            b.ingest(item)
        fresh = Bucket(self.t, self.factory())
        fresh.ingest(item)
        self.buckets.append(fresh)
        self._sweep()
        buckets = self.buckets
        if len(buckets) >= 2 and buckets[1].start <= self.t - self.config.window + 1:
            del buckets[0]

    def _sweep(self) -> None:
        buckets = self.buckets
        keep = 1.0 - self.config.epsilon
        i = 0
        while i <= len(buckets) - 3:
            floor = keep * buckets[i].value
            j = i
            for jj in range(len(buckets) - 1, i, -1):
                if buckets[jj].value > floor:
                    j = jj
                    break
            if j > i + 1:
                del buckets[i + 1 : j]
            i += 1

    # -- answers -----------------------------------------------------------

    def covers_window_exactly(self) -> bool:
        if not self.buckets:
            raise EmptyStateError("histogram has not seen any item")
        return self.buckets[0].start == self.window_start

    def query(self) -> float:
        if self.covers_window_exactly():
            return self.buckets[0].value
        return query_multiplier(self.config) * self.buckets[1].value


class CountEstimator:
    """Counts ingested items; the simplest smooth function."""

    __slots__ = ("n",)

    def __init__(self):
        self.n = 0

    def ingest(self, item) -> None:
        self.n += 1

    def value(self) -> int:
        return self.n

    def footprint(self) -> int:
        return 1


class DoublingWrapper:
    """Restart a sliding-window algorithm every ``w`` items.

    Each inner instance sees at most ``2w`` items; queries go to the older of
    the (at most two) live instances, whose suffix always contains the window.
    """

    def __init__(self, make_inner: Callable[[], Any], window: int):
        if window < 1:
            raise ConfigError(f"window must be a positive integer, got {window}")
        self.make_inner = make_inner
        self.window = window
        self.t = 0
        self.instances: list[tuple[int, Any]] = []
        self.max_live = 0

    def update(self, item) -> None:
        self.t += 1
        w = self.window
        self.instances = [(s, inst) for s, inst in self.instances if self.t - s + 1 <= 2 * w]
        if (self.t - 1) % w == 0:
            self.instances.append((self.t, self.make_inner()))
        for _, inst in self.instances:
            inst.update(item)
        self.max_live = max(self.max_live, len(self.instances))

    @property
    def active(self):
        if not self.instances:
            raise EmptyStateError("no instance has seen an item yet")
        return self.instances[0][1]

    @property
    def active_start(self) -> int:
        if not self.instances:
            raise EmptyStateError("no instance has seen an item yet")
        return self.instances[0][0]

    def query(self):
        return self.active.query()

    def bucket_count(self) -> int:
        return sum(inst.bucket_count() for _, inst in self.instances)

    def footprint(self) -> int:
        return sum(inst.footprint() for _, inst in self.instances)


def new_histogram(config: HistogramConfig, factory: EstimatorFactory) -> SlidingHistogram:
    return SlidingHistogram(config, factory)


def wrap_doubling(make_inner: Callable[[], Any], window: int) -> DoublingWrapper:
    return DoublingWrapper(make_inner, window)
