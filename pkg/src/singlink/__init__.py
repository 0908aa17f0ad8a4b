"""Exact combinatorics of resolution graphs of complex surface singularities."""

from .calculus import (
    BlowDownCertificate,
    are_isomorphic,
    blow_down,
    blow_up_arrow,
    blow_up_edge,
    blow_up_vertex,
    is_contractible,
    minimize,
    replay,
)
from .cover import (
    CoverArrow,
    CoverEdge,
    CoveringGraph,
    PipelineReport,
    Sheet,
    assign_euler_numbers,
    cover_graph,
    local_hj,
    resolve_cyclic,
    resolve_from_covering,
    splice_bamboos,
)
from .curve import CurveResolution, PuiseuxBranch, resolve_curve
from .errors import *  # noqa: F401,F403
from .graph import (
    Arrow,
    Edge,
    PlumbingGraph,
    Vertex,
    determinant,
    intersection_matrix,
    is_bamboo,
    is_negative_definite,
    is_rupture_vertex,
)
from .lens import (
    HJBamboo,
    LensParams,
    hj_evaluate,
    hj_expand,
    is_S1xS2,
    is_S3,
    lens_equivalent,
    lens_of_bamboo,
    lens_of_quasi_ordinary,
    resolve_quasi_ordinary,
    resolve_quasi_ordinary_by_line_blowups,
)
from .normalization import (
    BranchCoverData,
    PinchedTorusModel,
    compose_curlings_and_identifications,
    hyperplane_branch_count,
    is_manifold_link,
    models_homeomorphic,
    pinched_model,
)

__version__ = "0.1.0"
