"""Shelfwise: shelf-level purchasing chains and supply what-if analysis.

Pipeline: parse a transaction log, extract a per-product sublog,
discover a continuous-time Markov chain of purchasing behavior, enhance
it with a supply strategy, then solve for the stationary distribution
and quantify the shortage/waste trade-off.
"""

from .analysis import (
    NotIrreducible,
    SolverFailure,
    SteadyState,
    WhatIfResult,
    expected_quantity,
    expected_surplus,
    steady_state,
    undersupply_probability,
    what_if,
    what_if_sweep,
)
from .ctmc import (
    BatchExceedsCapacity,
    Ctmc,
    IrreducibilityReport,
    SupplyStrategy,
    enhance_with_supply,
    is_irreducible,
)
from .discovery import (
    CapacityTooSmall,
    DiscoveryReport,
    NoRates,
    QuantityClassStats,
    UnknownQuantityClass,
    discover_ctmc,
    interval_stats,
    quantity_classes,
)
from .errors import ShelfwiseError
from .eventlog import (
    Event,
    EventLog,
    IngestionConfig,
    MalformedRow,
    MissingColumn,
    ProductSublog,
    UnknownObject,
    extract_sublog,
    list_products,
    parse_log,
    read_jsonl,
    write_jsonl,
)
from .simulate import Occupancy, Trajectory, empirical_occupancy, sample_trajectory
from .units import TimeUnit

__version__ = "0.1.0"
