"""Binary-form arithmetic: gcds, distinct places, substitutions."""

import pytest

from intpoints import binforms
from intpoints.binforms import BinForm, parse_binform
from intpoints.errors import ParseError
from intpoints.projgeom import parse_form


def test_parse_and_eval():
    f = parse_binform("s^2 - 2*s*t + t^2")
    assert f.coeffs == (1, -2, 1)
    assert f(3, 1) == 4


def test_zero_form_allowed_as_value():
    z = binforms.zero(3)
    assert z.is_zero and z.degree == 3


def test_gcd_strips_content_and_factor():
    f = parse_binform("2*s^2 - 2*t^2")
    g = parse_binform("4*s^2 + 4*s*t")
    h = binforms.form_gcd([f, g])
    assert h.coeffs == (1, 1)  # s + t


def test_gcd_of_coprime_is_constant():
    f = parse_binform("s")
    g = parse_binform("t")
    assert binforms.form_gcd([f, g]).degree == 0


def test_distinct_places_counts_and_roots():
    # s * t * (s - t)^2: three distinct places, all rational
    f = binforms.mul(
        binforms.mul(parse_binform("s"), parse_binform("t")),
        binforms.power(parse_binform("s - t"), 2),
    )
    count, rational, irrational = binforms.distinct_places(f)
    assert count == 3
    assert set(rational) == {(0, 1), (1, 0), (1, 1)}
    assert irrational == ()


def test_distinct_places_irrational_witness():
    count, rational, irrational = binforms.distinct_places(parse_binform("s^2 - 2*t^2"))
    assert count == 2 and rational == ()
    assert len(irrational) == 1 and irrational[0].degree == 2


def test_compose_is_substitution():
    f = parse_binform("s^2 + t^2")
    g = binforms.compose(f, 1, 1, 0, 1)  # s -> s + t, t -> t
    assert g.coeffs == (1, 2, 2)
    for s, t in ((1, 2), (-3, 5)):
        assert g(s, t) == f(s + t, t)


def test_substitute_forms_degree_and_zero():
    q = parse_form("x1*x2 - x0^2")
    args = [parse_binform("s"), parse_binform("t"), parse_binform("t")]
    pb = binforms.substitute_forms(q, args)
    assert pb.degree == 2
    assert pb.coeffs == (-1, 0, 1)  # t^2 - s^2
    lin = parse_form("x1 - x2", 3)
    assert binforms.substitute_forms(lin, args).is_zero


def test_div_exact_errors_on_remainder():
    with pytest.raises(ParseError):
        binforms.div_exact(parse_binform("s^2 + t^2"), parse_binform("s + t"))
