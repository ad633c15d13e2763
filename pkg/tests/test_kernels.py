"""Twin equivalence: the compiled kernels must agree with the pure ones
bit for bit, across machine-word and big-integer regimes."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from intpoints import _kernels_py as pure
from intpoints import kernels

compiled = pytest.importorskip("intpoints._kernels_cy")

ints = st.integers(min_value=-(10 ** 30), max_value=10 ** 30)
small = st.integers(min_value=-(2 ** 40), max_value=2 ** 40)
primes = st.sampled_from([2, 3, 5, 7, 11, 13, 97, 101, 65537])


@given(st.integers(min_value=-(10 ** 40), max_value=10 ** 40).filter(lambda n: n != 0), primes)
def test_vp_twin(n, p):
    assert compiled.vp(n, p) == pure.vp(n, p)


@given(st.lists(ints, min_size=0, max_size=8))
def test_content_twin(values):
    assert compiled.content(values) == pure.content(values)


@given(st.lists(ints, min_size=1, max_size=6), primes)
def test_min_valuation_twin(values, p):
    assert compiled.min_valuation(values, p) == pure.min_valuation(values, p)


@given(st.lists(ints, min_size=1, max_size=6).filter(lambda v: any(x != 0 for x in v)))
def test_normalize_twin(values):
    assert compiled.normalize_tuple(tuple(values)) == pure.normalize_tuple(tuple(values))


@settings(max_examples=200)
@given(
    st.lists(small, min_size=1, max_size=5),
    st.data(),
)
def test_eval_terms_twin(coeffs, data):
    nvars = data.draw(st.integers(min_value=1, max_value=4))
    exps = tuple(
        tuple(data.draw(st.integers(min_value=0, max_value=5)) for _ in range(nvars))
        for _ in coeffs
    )
    coords = tuple(data.draw(small) for _ in range(nvars))
    assert compiled.eval_terms(tuple(coeffs), exps, coords) == pure.eval_terms(
        tuple(coeffs), exps, coords
    )


def test_eval_terms_big_fallback():
    coeffs = (1,)
    exps = ((30,),)
    coords = (10 ** 6,)
    expected = 10 ** 180
    assert compiled.eval_terms(coeffs, exps, coords) == expected
    assert pure.eval_terms(coeffs, exps, coords) == expected


def test_vp_zero_rejected():
    with pytest.raises(ValueError):
        kernels.vp(0, 2)


def test_backend_reports_name():
    assert kernels.backend() in ("cython", "python")
