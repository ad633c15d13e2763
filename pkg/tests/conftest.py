import pytest

from intpoints.projgeom import normalize_point, points_subscheme


SEVEN_COORDS = [
    (0, 0, 1), (0, 1, 0), (0, 1, 1), (1, 0, 0), (1, 0, 1), (1, 1, 0), (1, 1, 1),
]


@pytest.fixture(scope="session")
def seven_points():
    return points_subscheme([normalize_point(c) for c in SEVEN_COORDS])
