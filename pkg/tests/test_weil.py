"""The canonical local values: examples, oracle equivalence, laws."""

import random
from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from intpoints.errors import InvalidPoint, MissingArchLevel, OnSubscheme
from intpoints.projgeom import (
    ARCH,
    Subscheme,
    canonical_points,
    empty_subscheme,
    finite,
    normalize_point,
    parse_form,
    point_ideal,
    points_subscheme,
)
from intpoints.weil import (
    LevelVector,
    classify_set,
    local_weil,
    minimal_levels,
    oracle_weil_points,
    support_places,
    verify_point,
)


def brute_support(D, P, prime_bound=200):
    """Independent oracle: scan small primes dividing a component gcd."""
    out = set()
    from intpoints.projgeom import evaluate_form

    for comp in D.components:
        vals = [evaluate_form(g, P) for g in comp]
        g = 0
        for v in vals:
            g = gcd(g, v)
        for p in range(2, prime_bound):
            if all(p % q for q in range(2, p)) and g % p == 0:
                out.add(p)
    return out


# ---------------------------------------------------------------------------
# local values


def test_local_weil_point_component_at_2():
    D = point_ideal(normalize_point((1, 0, 0)))
    w = local_weil(D, normalize_point((5, 2, 2)), finite(2))
    # generators (x1, x2) evaluate to (2, 2); min valuation 1
    assert w.value == 2


def test_local_weil_infinite_on_component(seven_points):
    w = local_weil(seven_points, normalize_point((1, 1, 1)), finite(7))
    assert w.infinite
    assert local_weil(seven_points, normalize_point((1, 1, 1)), ARCH).infinite


def test_local_weil_arch_on_the_line():
    D = point_ideal(normalize_point((1, 0)))
    for n in (1, 3, -17, 128):
        P = normalize_point((n, 1))
        assert local_weil(D, P, ARCH).value == max(abs(n), 1)


def test_local_weil_empty_subscheme_is_trivial():
    D = empty_subscheme(3)
    P = normalize_point((4, -3, 2))
    assert local_weil(D, P, finite(5)).value == 1
    assert local_weil(D, P, ARCH).value == 1


def test_arch_lower_bound_invariant(seven_points):
    # value >= 1 / max over generators of the coefficient l1-norm
    bound = Fraction(
        1, max(g.coeff_abs_sum for comp in seven_points.components for g in comp)
    )
    for P in canonical_points(2, 3):
        w = local_weil(seven_points, P, ARCH)
        if not w.infinite:
            assert w.value >= bound


# ---------------------------------------------------------------------------
# support


def test_support_seven_points(seven_points):
    sup = support_places(seven_points, normalize_point((1, 2, 4)))
    assert [v.p for v in sup] == [2]
    assert brute_support(seven_points, normalize_point((1, 2, 4))) == {2}


def test_support_empty_when_units():
    D = point_ideal(normalize_point((0, 0, 1)))
    assert support_places(D, normalize_point((1, 1, 1))) == ()


def test_support_on_subscheme_raises(seven_points):
    with pytest.raises(OnSubscheme):
        support_places(seven_points, normalize_point((1, 0, 1)))


def test_support_matches_values(seven_points):
    # completeness and soundness of the support computation
    for P in canonical_points(2, 3):
        try:
            sup = {v.p for v in support_places(seven_points, P)}
        except OnSubscheme:
            continue
        assert sup == brute_support(seven_points, P)
        for p in sup:
            assert local_weil(seven_points, P, finite(p)).value > 1
        for p in (2, 3, 5, 7):
            if p not in sup:
                assert local_weil(seven_points, P, finite(p)).value == 1


# ---------------------------------------------------------------------------
# minimal levels and verification


def test_minimal_levels_seven(seven_points):
    lv = minimal_levels(seven_points, normalize_point((1, 2, 2)))
    assert dict(lv.finite) == {2: 1}
    assert lv.arch == 2


def test_minimal_levels_empty_support():
    D = point_ideal(normalize_point((1, 0)))
    lv = minimal_levels(D, normalize_point((7, 1)))
    assert lv.finite == ()
    assert lv.arch == 7


def test_minimal_levels_on_d_raises(seven_points):
    with pytest.raises(OnSubscheme):
        minimal_levels(seven_points, normalize_point((1, 1, 0)))


def test_verify_pass_and_fail(seven_points):
    rep = verify_point(
        seven_points, normalize_point((1, 2, 4)), LevelVector.of({2: 1}, 4)
    )
    assert rep.verdict and not rep.offending

    rep = verify_point(
        seven_points, normalize_point((7, 2, 2)), LevelVector.of({2: 2}, 100)
    )
    assert not rep.verdict
    assert finite(5) in rep.offending


def test_verify_on_d_fails_with_offender(seven_points):
    rep = verify_point(
        seven_points, normalize_point((1, 1, 1)), LevelVector.of({2: 5}, 1000)
    )
    assert not rep.verdict and rep.offending
    rep = verify_point(seven_points, normalize_point((1, 1, 1)), LevelVector.of(), S={ARCH})
    assert not rep.verdict and rep.offending


def test_verify_missing_arch_level(seven_points):
    with pytest.raises(MissingArchLevel):
        verify_point(seven_points, normalize_point((1, 2, 4)), LevelVector.of({2: 1}))


def test_verify_monotone(seven_points):
    # enlarging levels never flips pass to fail
    P = normalize_point((4, -3, 2))
    lv = minimal_levels(seven_points, P)
    assert verify_point(seven_points, P, lv).verdict
    bigger = lv.merge_max(LevelVector.of({2: 3, 11: 2}, 50))
    assert verify_point(seven_points, P, bigger).verdict


def test_verify_scaling_robust(seven_points):
    # the value only sees the canonical representative
    P = normalize_point((4, -3, 2))
    Q = normalize_point((-12, 9, -6))
    assert P == Q
    lv = minimal_levels(seven_points, P)
    assert verify_point(seven_points, Q, lv).verdict


# ---------------------------------------------------------------------------
# the oracle and the union/max law


def test_oracle_examples():
    P = normalize_point((5, 2, 2))
    assert oracle_weil_points([normalize_point((1, 0, 0))], P, finite(2)).value == 2
    assert oracle_weil_points([normalize_point((1, 1, 1))], P, finite(3)).value == 3
    assert oracle_weil_points([normalize_point((1, 1, 0))], P, finite(7)).value == 1


def test_oracle_rejects_coincidence():
    P = normalize_point((1, 1, 1))
    with pytest.raises(OnSubscheme):
        oracle_weil_points([P], P, finite(3))


def test_oracle_equivalence_randomized():
    rng = random.Random(20240601)
    pool = list(canonical_points(2, 4))
    primes = [2, 3, 5, 7, 11, 13, 17, 19, 23]
    for _ in range(300):
        Ts = rng.sample(pool, rng.randint(1, 3))
        P = rng.choice(pool)
        if P in Ts:
            continue
        p = rng.choice(primes)
        D = points_subscheme(Ts)
        assert oracle_weil_points(Ts, P, finite(p)).value == local_weil(D, P, finite(p)).value


def test_union_max_law():
    rng = random.Random(77)
    pool = list(canonical_points(2, 3))
    for _ in range(60):
        pts = rng.sample(pool, 5)
        A, B = pts[:2], pts[2:4]
        P = pts[4]
        if P in A + B:
            continue
        DA, DB = points_subscheme(A), points_subscheme(B)
        DAB = points_subscheme(A + B)
        for p in (2, 3, 5, 7, 11):
            lhs = local_weil(DAB, P, finite(p)).value
            rhs = max(
                local_weil(DA, P, finite(p)).value, local_weil(DB, P, finite(p)).value
            )
            assert lhs == rhs


# ---------------------------------------------------------------------------
# classification


def test_classify_n_over_1_family():
    D = point_ideal(normalize_point((1, 0)))
    pts = [normalize_point((n, 1)) for n in range(1, 101)]
    cls = classify_set(pts, D)
    assert cls.classical_everywhere and cls.classical_outside_s
    assert cls.everywhere_witness.arch == 100
    half = classify_set(pts[:50], D)
    assert half.everywhere_witness.arch == 50


def test_classify_single_point(seven_points):
    P = normalize_point((1, 2, 2))
    cls = classify_set([P], seven_points)
    assert cls.everywhere_witness == minimal_levels(seven_points, P)
    assert not cls.classical_everywhere  # support {2}
    assert cls.support_union == (2,)


def test_classify_family_support_growth(seven_points):
    family = [normalize_point((2 * k + 1, 2, 2)) for k in range(1, 40, 2)]
    cls = classify_set(family, seven_points)
    assert 2 in cls.support_union
    # the family picks up odd support: e.g. [7:2:2] matches [1:1:1] mod 5
    assert any(p > 2 for p in cls.support_union)
    s2 = {finite(p) for p in cls.support_union if p != 2} | {ARCH}
    assert classify_set(family, seven_points, s2).classical_outside_s is False  # 2 remains


def test_classify_rejects_empty():
    with pytest.raises(InvalidPoint):
        classify_set([], empty_subscheme(2))


# ---------------------------------------------------------------------------
# level vectors


def test_level_vector_normalization():
    lv = LevelVector.of({3: 1, 2: 0}, Fraction(5, 2))
    assert lv.finite == ((3, 1),)
    assert lv.bound(finite(2)) == 1
    assert lv.bound(finite(3)) == 3
    assert lv.bound(ARCH) == Fraction(5, 2)


def test_level_vector_merge_and_restrict():
    a = LevelVector.of({2: 1}, 3)
    b = LevelVector.of({2: 2, 5: 1})
    m = a.merge_max(b)
    assert dict(m.finite) == {2: 2, 5: 1} and m.arch == 3
    r = m.without_places({finite(5), ARCH})
    assert dict(r.finite) == {2: 2} and r.arch is None


def test_level_vector_rejects_bad_entries():
    with pytest.raises(InvalidPoint):
        LevelVector(((4, 1),), None)
    with pytest.raises(InvalidPoint):
        LevelVector.of({}, -1)
