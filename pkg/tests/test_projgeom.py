"""Canonical representations and exact evaluation."""

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from intpoints.errors import InvalidPoint, ParseError
from intpoints.projgeom import (
    HomForm,
    canonical_points,
    evaluate_at_tuple,
    evaluate_form,
    format_form,
    normalize_point,
    parse_form,
    parse_point,
    point_ideal,
    points_subscheme,
    reduce_point,
)

rationals = st.fractions(
    min_value=Fraction(-50), max_value=Fraction(50), max_denominator=20
)


def test_normalize_clears_denominators():
    assert normalize_point((Fraction(2, 3), Fraction(4, 3), 0)).coords == (1, 2, 0)


def test_normalize_sign_and_gcd():
    assert normalize_point((-2, -4, -6)).coords == (1, 2, 3)


def test_normalize_rejects_zero():
    with pytest.raises(InvalidPoint):
        normalize_point((0, 0, 0))


@given(st.lists(rationals, min_size=2, max_size=4).filter(lambda v: any(v)))
def test_normalize_idempotent(raw):
    P = normalize_point(raw)
    assert normalize_point(P.coords) == P


@given(
    st.lists(st.integers(min_value=-9, max_value=9), min_size=3, max_size=3).filter(
        lambda v: any(v)
    ),
    st.integers(min_value=-7, max_value=7).filter(lambda n: n != 0),
)
def test_evaluate_homogeneous_consistency(raw, lam):
    f = parse_form("x0^2 - x1*x2 + 3*x2^2")
    scaled = tuple(lam * c for c in raw)
    assert evaluate_at_tuple(f, scaled) == lam ** f.degree * evaluate_at_tuple(f, raw)


def test_evaluate_form_examples():
    f = parse_form("x0 - x1", 3)
    assert evaluate_form(f, normalize_point((5, 2, 2))) == 3
    g = parse_form("x1*x2 - x0^2")
    assert evaluate_form(g, normalize_point((1, 1, 1))) == 0
    h = parse_form("x0*x1", 2)
    assert evaluate_form(h, normalize_point((3, 4))) == 12


def test_point_ideal_examples():
    gens = point_ideal(normalize_point((0, 0, 1))).components[0]
    assert [str(g) for g in gens] == ["x0", "x1"]
    gens = point_ideal(normalize_point((1, 1, 1))).components[0]
    assert [str(g) for g in gens] == ["x0 - x1", "x0 - x2", "x1 - x2"]
    gens = point_ideal(normalize_point((1, 0))).components[0]
    assert [str(g) for g in gens] == ["x1"]


def test_point_ideal_vanishes_exactly_at_point():
    T = normalize_point((3, -5, 7))
    gens = point_ideal(T).components[0]
    assert all(evaluate_form(g, T) == 0 for g in gens)
    hits = 0
    for P in canonical_points(2, 3):
        if P == T:
            continue
        if all(evaluate_form(g, P) == 0 for g in gens):
            hits += 1
    assert hits == 0


def test_points_subscheme_component_counts(seven_points):
    assert len(seven_points.components) == 7
    single = points_subscheme([normalize_point((1, 1, 1))])
    assert single.components == point_ideal(normalize_point((1, 1, 1))).components
    dup = points_subscheme([normalize_point((1, 0)), normalize_point((2, 0))])
    assert len(dup.components) == 1


def test_reduce_point_examples():
    P = normalize_point((5, 2, 2))
    assert reduce_point(P, 2).residues == (1, 0, 0)
    assert reduce_point(P, 3).residues == (2, 2, 2)
    assert reduce_point(normalize_point((1, 2, 4)), 7).residues == (1, 2, 4)


def test_form_content_normalized():
    f = parse_form("2*x0 + 4*x1", 2)
    assert f.terms == (((1, 0), 1), ((0, 1), 2))


def test_form_parser_rationals_and_powers():
    f = parse_form("x0^2/2 - x1**2/3", 2)
    assert f == parse_form("3*x0^2 - 2*x1^2", 2)


def test_form_parser_rejects_inhomogeneous():
    with pytest.raises(InvalidPoint):
        parse_form("x0 + x1^2", 2)


def test_form_parse_format_roundtrip():
    for text in ("x0*x2 - x1^2", "3*x0^2 - 2*x1*x2 + x2^2", "x1"):
        f = parse_form(text, 3)
        assert parse_form(format_form(f), 3) == f


def test_point_parser():
    assert parse_point("[1/2 : 1 : 0]").coords == (1, 2, 0)
    with pytest.raises(ParseError):
        parse_point("(1:2)")


def test_zero_form_rejected():
    with pytest.raises((InvalidPoint, ParseError)):
        parse_form("x0 - x0", 2)


def test_canonical_points_deterministic_and_primitive():
    pts = list(canonical_points(1, 2))
    assert pts == [
        normalize_point(c)
        for c in [(0, 1), (1, -1), (1, 0), (1, 1), (1, -2), (1, 2), (2, -1), (2, 1)]
    ]
    assert all(P == normalize_point(P.coords) for P in pts)
