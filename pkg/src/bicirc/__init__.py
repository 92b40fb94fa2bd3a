"""Perfect sampling and approximate counting of bicircular matroid bases."""

from .counting import (
    AnnealSchedule,
    CountEstimate,
    DeletionSequence,
    build_deletion_sequence,
    count_exact,
    count_fpras_anneal,
    count_fpras_telescope,
    enumerate_bases,
    exact_expected_resamples,
    exact_gibbs_distribution,
    exact_partition_function,
    make_anneal_schedules,
    subgraph,
)
from .errors import (
    BicircError,
    Disconnected,
    DuplicateEdge,
    EmptyGraph,
    EmptySupport,
    GraphFormatError,
    InvalidInstance,
    MalformedLine,
    NotACycle,
    SelfLoop,
    TooFewEdges,
    TooLarge,
    ZeroRatio,
)
from .graph import (
    DirectedCycle,
    Graph,
    arrow_support,
    cycle_orientation_sign,
    is_basis,
    parse_edge_list,
    prod_degrees,
    serialize_edge_list,
    validate_bicircular_instance,
)
from .rng import ResamplingTable, derive_seed
from .sampler import (
    BadEvent,
    Deterministic,
    Gibbs,
    SampleReport,
    functional_cycles,
    occurring_bad_events,
    sample_basis,
    sample_gibbs,
    sample_lerw,
    sample_lerw_batch,
    sample_parallel,
)

__version__ = "0.1.0"
