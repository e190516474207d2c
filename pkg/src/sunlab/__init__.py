"""Polyhedral normed spaces: intervals, ball hulls, betweenness metrics,
nearest-point luminosity and max-coordinate embeddings."""

from .errors import (
    DimensionMismatch,
    DuplicatePoints,
    Degenerate,
    EmptyCloud,
    EndpointNotInCloud,
    NotANearestPoint,
    NotSymmetric,
    ParseError,
    QueryInCloud,
    SunlabError,
    TooLarge,
    WeightMismatch,
)
from .space import (
    Ball,
    Space,
    ball_contains,
    builtin,
    make_space,
    norm,
    norms,
    random_space,
    space_from_json,
    space_from_name,
    space_to_json,
    unit_ball_extents,
)
from .cloud import PointCloud, cloud_from_json, cloud_to_json, load_cloud
from .hull import (
    GapReport,
    HullApprox,
    MConnectReport,
    MeiReport,
    MGraph,
    SlabPolytope,
    ball_hull_outer,
    hull_interval_gap,
    interval,
    interval_contains,
    m_connected,
    m_connectivity_graph,
    mei_check,
    slab_vertices_2d,
)
from .metric import (
    BetweennessGraph,
    EquivReport,
    MonotoneVerdict,
    Path,
    PathNotFound,
    SeqReport,
    Weights,
    associated_norm,
    associated_norms,
    between_equiv_check,
    betweenness_defect,
    betweenness_graph,
    check_monotone,
    check_weights,
    geometric_weights,
    is_between,
    monotone_path,
    seq_convergence_check,
    uniform_weights,
    weights_from_json,
)
from .approx import (
    NoCandidate,
    ProjectionResult,
    SunReport,
    SunSampleReport,
    find_luminosity,
    is_sun_sampled,
    project,
    sun_check,
)
from .embed import (
    EmbedResult,
    Embedding,
    NormConvReport,
    OrderingReport,
    embed_cloud,
    embed_point,
    embedding_from_json,
    make_embedding,
    norm_convergence_check,
)
from .verify import run_verify

__version__ = "0.1.0"

__all__ = [
    "Ball",
    "BetweennessGraph",
    "DimensionMismatch",
    "DuplicatePoints",
    "Degenerate",
    "EmbedResult",
    "Embedding",
    "EmptyCloud",
    "EndpointNotInCloud",
    "EquivReport",
    "GapReport",
    "HullApprox",
    "MConnectReport",
    "MeiReport",
    "MGraph",
    "MonotoneVerdict",
    "NoCandidate",
    "NormConvReport",
    "NotANearestPoint",
    "NotSymmetric",
    "OrderingReport",
    "ParseError",
    "Path",
    "PathNotFound",
    "PointCloud",
    "ProjectionResult",
    "QueryInCloud",
    "SeqReport",
    "SlabPolytope",
    "Space",
    "SunReport",
    "SunSampleReport",
    "SunlabError",
    "TooLarge",
    "WeightMismatch",
    "Weights",
    "associated_norm",
    "associated_norms",
    "ball_contains",
    "ball_hull_outer",
    "between_equiv_check",
    "betweenness_defect",
    "betweenness_graph",
    "builtin",
    "check_monotone",
    "check_weights",
    "cloud_from_json",
    "cloud_to_json",
    "embed_cloud",
    "embed_point",
    "embedding_from_json",
    "find_luminosity",
    "geometric_weights",
    "hull_interval_gap",
    "interval",
    "interval_contains",
    "is_between",
    "is_sun_sampled",
    "load_cloud",
    "m_connected",
    "m_connectivity_graph",
    "make_embedding",
    "make_space",
    "mei_check",
    "monotone_path",
    "norm",
    "norm_convergence_check",
    "norms",
    "project",
    "random_space",
    "run_verify",
    "seq_convergence_check",
    "slab_vertices_2d",
    "space_from_json",
    "space_from_name",
    "space_to_json",
    "sun_check",
    "uniform_weights",
    "unit_ball_extents",
    "weights_from_json",
]
