"""Directed triangle census, closure statistics and wedge sampling for digraphs
with reciprocal edges."""

__version__ = "0.1.0"

from .census import (
    CLOSURE_PAIRS,
    CensusReport,
    TriangleType,
    WedgeType,
    brute_force_census,
    chi,
    classify_triangle,
    closures,
    cyclic_breakdown,
    enumerate_triangle_census,
    recip_group_closure,
    total_wedge_counts,
    wedge_counts_at_vertex,
)
from .errors import (
    IncompatibleTypesError,
    IngestionError,
    NoWedgesError,
    NotATriangleError,
    SizeCapError,
    TriadicError,
    UndefinedValueError,
)
from .graph import DegreeTriple, Digraph, EdgeRelation, build_digraph, connecting_edge, degrees, reciprocity
from .io import ChartData, parse_edge_list, read_digraph
from .null import (
    NullPrediction,
    deviation_report,
    null_triangle_probs,
    null_wedge_probs,
    randomize_directions,
    undirect,
)
from .sampling import (
    ClosureEstimate,
    TriangleEstimate,
    Wedge,
    WedgeSampler,
    build_sampler,
    estimate_closures,
    estimate_triangles,
    full_estimated_census,
    hoeffding_error,
    hoeffding_k,
    is_closed,
    sample_wedge,
)
