"""Cayley-Klein plane geometry kernel: circles, radical centers and Miquel-Steiner points."""
from .errors import *  # noqa: F401,F403
from .projective import (  # noqa: F401
    DEFAULT_TOL,
    Conic,
    HLine,
    HPoint,
    ToleranceContext,
    canonical,
    chi,
    conic_eval,
    conic_intersections,
    cross_ratio,
    incidence,
    join,
    meet,
    on_conic,
    polar,
    pole,
    proj_distance,
    proj_equal,
)
from .cayley_klein import (  # noqa: F401
    Kind,
    PlaneStructure,
    classify_plane,
    congruent,
    midpoints,
    normalize_point,
)
from .circles import (  # noqa: F401
    ReferenceFrame,
    circle_center,
    circle_decomposition,
    circular_points,
    circumcircle_through,
    frame_from_lemoine,
    frame_regular,
    frame_singular,
    radical_line_at_vertex,
)

__version__ = "0.1.0"
