"""Exact integrality of rational points on punctured projective varieties.

The package fixes one canonical multiplicative representative of the
local closeness function of a point against a subscheme, evaluates it
exactly at every place of Q, verifies and classifies point sets under
four notions of integrality, and constructs certified dense sets of
everywhere-integral and S-integral points on curves, surfaces and
projective spaces.

Hot integer kernels live in a compiled extension with a pure-Python
twin; see intpoints.kernels.backend().
"""

__version__ = "0.1.0"

from .projgeom import (  # noqa: F401
    ARCH,
    HomForm,
    ModPoint,
    Place,
    ProjPoint,
    Subscheme,
    evaluate_form,
    finite,
    normalize_point,
    parse_form,
    parse_point,
    point_ideal,
    points_subscheme,
    reduce_point,
)
from .weil import (  # noqa: F401
    LevelVector,
    WeilReport,
    WeilValue,
    classify_set,
    local_weil,
    minimal_levels,
    oracle_weil_points,
    support_places,
    verify_point,
)
