"""Discrete-time quantum walk search on rings and tori with HN4 long-range edges."""
from .topology import (
    DirectedSelfLoop,
    DomainError,
    Hn4Coord,
    LatticeSpec,
    Regular,
    from_hn4,
    is_directed_selfloop,
    level_size,
    long_range_neighbors,
    to_hn4,
)
from .walk import (
    CoinKind,
    CoinSpec,
    MarkedSet,
    NumericalIntegrityError,
    TimeSeries,
    Walk,
    apply_coin,
    apply_shift,
    build_initial_state,
    evolve,
    step,
    success_probability,
)

__version__ = "0.1.0"
