"""Sliding-window estimators for almost-smooth functions and graph streams."""

from .algorithms import (
    ALGORITHMS,
    WindowAlgorithm,
    WindowAlgorithmSpec,
    mm_estimate_squared,
    mm_estimate_via_goodedges,
    ratio_bounds,
    vc_approx,
    vc_estimate_forest,
)
from .graph_streams import (
    AlphaGoodTracker,
    CapacityError,
    EdgeItem,
    ExactMatching,
    GreedyMatching,
    RejectedItemError,
)
from .histogram import (
    ConfigError,
    CountEstimator,
    DoublingWrapper,
    EmptyStateError,
    HistogramConfig,
    SlidingHistogram,
    new_histogram,
    query_multiplier,
    wrap_doubling,
)

__version__ = "0.1.0"
