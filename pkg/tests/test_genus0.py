"""Genus-zero searches: punctures, congruence moduli, weak approximation."""

import pytest

from intpoints.binforms import BinForm, parse_binform
from intpoints.errors import (
    BadPunctureCount,
    BaseNotIntegral,
    Exhausted,
    IntersectsD,
    IrrationalPunctures,
    UnitsFinite,
)
from intpoints.genus0 import (
    CurveMap,
    choose_modulus,
    curve_map,
    curve_meets,
    map_point,
    param_pairs,
    proj_congruent,
    pullback,
    reparametrize,
    search_genus0,
    search_s_integral,
)
from intpoints.projgeom import (
    ARCH,
    Subscheme,
    empty_subscheme,
    finite,
    normalize_point,
    parse_form,
    point_ideal,
    points_subscheme,
)
from intpoints.weil import LevelVector, minimal_levels, support_places, verify_point


def line(*cols):
    return curve_map([BinForm(c) for c in cols])


IDENT = curve_map([parse_binform("s"), parse_binform("t")])


# ---------------------------------------------------------------------------
# pullback and intersections


def test_pullback_examples():
    phi = curve_map([parse_binform("s"), parse_binform("t"), parse_binform("t")])
    D = Subscheme(3, ((parse_form("x0", 3),),), codim=1)
    assert [f.coeffs for comp in pullback(D, phi) for f in comp] == [(1, 0)]
    pb = pullback(point_ideal(normalize_point((1, 1, 1))), phi)
    assert [str(f) for f in pb[0]] == ["s - t", "s - t", "0"]


def test_curve_meets_counts(seven_points):
    assert curve_meets(point_ideal(normalize_point((1, 0))), IDENT).count == 1
    assert curve_meets(point_ideal(normalize_point((1, 0))), IDENT).rational == ((1, 0),)
    two = Subscheme(2, ((parse_form("x0*x1", 2),),), codim=1)
    assert curve_meets(two, IDENT).count == 2
    # a line avoiding all seven residue-class points
    phi = line((4, 0), (-3, 1), (2, -1))
    assert curve_meets(seven_points, phi).count == 0


def test_curve_meets_inside_component():
    D = Subscheme(3, ((parse_form("x0", 3),),), codim=1)
    phi = curve_map([BinForm((0, 0)), parse_binform("s"), parse_binform("t")])
    pd = curve_meets(D, phi)
    assert pd.count is None and pd.kind == "many"


def test_curve_meets_reparametrization_invariant(seven_points):
    phi = line((4, 0), (-3, 1), (2, -1))
    psi = reparametrize(phi, 3, 1, 2, 1)  # det = 1
    assert curve_meets(seven_points, phi).count == curve_meets(seven_points, psi).count
    conic = Subscheme(3, ((parse_form("x0*x2 - x1^2"),),), codim=1)
    assert curve_meets(conic, phi).count == curve_meets(conic, psi).count


# ---------------------------------------------------------------------------
# moduli and congruence


def test_choose_modulus_examples(seven_points):
    phi = line((4, 0), (-3, 1), (2, -1))
    base = normalize_point((4, -3, 2))
    lv = minimal_levels(seven_points, base)
    assert choose_modulus(seven_points, phi, (1, 0), lv) == 4  # {2:1} -> 2^2
    D0 = empty_subscheme(2)
    assert choose_modulus(D0, IDENT, (1, 1), LevelVector.of({}, 5)) == 1
    assert choose_modulus(D0, IDENT, (1, 1), LevelVector.of({2: 2, 3: 1}, 5)) == 72


def test_choose_modulus_checks_seed(seven_points):
    phi = line((4, 0), (-3, 1), (2, -1))
    with pytest.raises(BaseNotIntegral):
        choose_modulus(seven_points, phi, (1, 0), LevelVector.of({}, 100))


def test_proj_congruent():
    assert proj_congruent((5, 4), (1, 0), (((2, 2)),))
    assert not proj_congruent((5, 2), (1, 0), ((2, 2),))
    # scaling by a unit keeps the class
    assert proj_congruent((3, 0), (1, 0), ((2, 2),))


def test_param_pairs_order_and_primitivity():
    pairs = list(param_pairs(2))
    assert pairs[:4] == [(0, 1), (1, -1), (1, 0), (1, 1)]
    assert all(abs(s) <= 2 and abs(t) <= 2 for s, t in pairs)
    assert len(set(pairs)) == len(pairs)


# ---------------------------------------------------------------------------
# everywhere search


def test_search_empty_subscheme():
    hits = search_genus0(IDENT, empty_subscheme(2), (1, 1), LevelVector.of({}, 10), 8)
    assert len(hits) == 8
    assert all(h.report.verdict for h in hits)


def test_search_seven_points_line(seven_points):
    base = normalize_point((4, -3, 2))
    lv = minimal_levels(seven_points, base)
    phi = line((4, 0), (-3, 1), (2, -1))
    hits = search_genus0(phi, seven_points, (1, 0), lv, 50)
    assert len(hits) == 50
    # re-verify independently, and congruence soundness:
    for h in hits:
        assert verify_point(seven_points, h.point, lv).verdict
        sup = {v.p for v in support_places(seven_points, h.point)}
        assert sup <= set(lv.support)


def test_search_intersecting_line_rejected(seven_points):
    bad = line((4, 1), (-3, 1), (2, 0))  # direction [1:1:0] lies in the set
    with pytest.raises(IntersectsD):
        search_genus0(bad, seven_points, (1, 0), LevelVector.of({2: 1}, 2), 5)


def test_search_bad_seed(seven_points):
    phi = line((4, 0), (-3, 1), (2, -1))
    with pytest.raises(BaseNotIntegral):
        search_genus0(phi, seven_points, (1, 0), LevelVector.of({}, 1), 5)


def test_search_exhausted_partial():
    D = point_ideal(normalize_point((1, 0)))
    with pytest.raises(Exhausted) as err:
        search_genus0(IDENT, D, (0, 1), LevelVector.of({}, 3), 1000, cap=5)
    assert 0 < len(err.value.partial) < 1000


def test_search_deterministic(seven_points):
    base = normalize_point((4, -3, 2))
    lv = minimal_levels(seven_points, base)
    phi = line((4, 0), (-3, 1), (2, -1))
    a = search_genus0(phi, seven_points, (1, 0), lv, 12)
    b = search_genus0(phi, seven_points, (1, 0), lv, 12)
    assert [h.point for h in a] == [h.point for h in b]
    assert [h.param for h in a] == [h.param for h in b]


# ---------------------------------------------------------------------------
# S-integral search


def test_s_integral_one_puncture_translates():
    # divisor part vanishes at the parameter point (1:0); integral points
    # of the complement are the integer translates [k:1]
    Dprime = Subscheme(2, ((parse_form("x1", 2),),), codim=1)
    lv = minimal_levels(Dprime, normalize_point((0, 1)))
    hits = search_s_integral(
        IDENT, Dprime, empty_subscheme(2), {ARCH}, (0, 1), lv, 9
    )
    assert [h.point.coords for h in hits] == [
        (0, 1), (1, 1), (1, -1), (2, 1), (2, -1), (3, 1), (3, -1), (4, 1), (4, -1)
    ]


def test_s_integral_two_punctures_unit_powers():
    Dprime = Subscheme(2, ((parse_form("x0*x1", 2),),), codim=1)
    lv = minimal_levels(Dprime, normalize_point((1, 1)))
    S = {ARCH, finite(2)}
    hits = search_s_integral(IDENT, Dprime, empty_subscheme(2), S, (1, 1), lv, 12)
    got = {h.point.coords for h in hits}
    assert (1, 1) in got and (2, 1) in got and (1, 2) in got and (4, 1) in got
    for h in hits:
        # S-integrality: odd places carry no support
        sup = {v.p for v in support_places(Dprime, h.point)}
        assert sup <= {2}


def test_s_integral_units_finite():
    Dprime = Subscheme(2, ((parse_form("x0*x1", 2),),), codim=1)
    lv = minimal_levels(Dprime, normalize_point((1, 1)))
    with pytest.raises(UnitsFinite):
        search_s_integral(
            IDENT, Dprime, empty_subscheme(2), {ARCH}, (1, 1), lv, 5
        )


def test_s_integral_irrational_punctures():
    Dprime = Subscheme(2, ((parse_form("x0^2 - 2*x1^2", 2),),), codim=1)
    lv = minimal_levels(Dprime, normalize_point((1, 1)))
    with pytest.raises(IrrationalPunctures):
        search_s_integral(
            IDENT, Dprime, empty_subscheme(2), {ARCH, finite(2)}, (1, 1), lv, 5
        )


def test_s_integral_requires_arch_in_s():
    Dprime = Subscheme(2, ((parse_form("x1", 2),),), codim=1)
    with pytest.raises(BadPunctureCount):
        search_s_integral(
            IDENT, Dprime, empty_subscheme(2), {finite(2)}, (0, 1), LevelVector.of(), 5
        )


def test_s_integral_meets_codim2_rejected():
    Dprime = Subscheme(2, ((parse_form("x1", 2),),), codim=1)
    N = point_ideal(normalize_point((1, 1)))
    with pytest.raises(IntersectsD):
        search_s_integral(IDENT, Dprime, N, {ARCH}, (0, 1), LevelVector.of(), 5)
