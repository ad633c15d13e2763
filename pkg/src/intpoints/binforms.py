"""Dense binary forms over the integers.

A BinForm of degree d is the coefficient tuple (c_0, ..., c_d) of
sum_k c_k s^(d-k) t^k.  Unlike the subscheme generators these are not
content-normalized (curve maps need relative scales between coordinates,
and pullbacks may vanish identically), so the zero form of any degree is
representable.

Ring arithmetic is hand-rolled convolution; gcds and factorization over
Q go through sympy.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

import sympy

from . import kernels
from .errors import ParseError
from .projgeom import HomForm, parse_poly_dict

_S, _T = sympy.symbols("s t")


@dataclass(frozen=True)
class BinForm:
    """coeffs[k] multiplies s^(degree-k) t^k; degree = len(coeffs) - 1."""

    coeffs: tuple[int, ...]

    def __post_init__(self):
        if not self.coeffs:
            raise ParseError("binary form needs at least one coefficient")

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def __call__(self, s: int, t: int) -> int:
        d = self.degree
        return sum(c * s ** (d - k) * t ** k for k, c in enumerate(self.coeffs))

    def __str__(self):
        if self.is_zero:
            return "0"
        parts = []
        d = self.degree
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mono = []
            if d - k:
                mono.append("s" if d - k == 1 else f"s^{d - k}")
            if k:
                mono.append("t" if k == 1 else f"t^{k}")
            body = "*".join(mono)
            if body:
                lead = "" if abs(c) == 1 else f"{abs(c)}*"
                body = lead + body
            else:
                body = str(abs(c))
            parts.append(("- " if c < 0 else "+ ") + body)
        out = " ".join(parts)
        return out[2:] if out.startswith("+ ") else "-" + out[2:]


def zero(degree: int) -> BinForm:
    return BinForm((0,) * (degree + 1))


def constant(c: int) -> BinForm:
    return BinForm((c,))


def add(f: BinForm, g: BinForm) -> BinForm:
    if f.degree != g.degree:
        raise ParseError("adding binary forms of different degrees")
    return BinForm(tuple(a + b for a, b in zip(f.coeffs, g.coeffs)))


def scale(f: BinForm, c: int) -> BinForm:
    return BinForm(tuple(c * a for a in f.coeffs))


def mul(f: BinForm, g: BinForm) -> BinForm:
    out = [0] * (f.degree + g.degree + 1)
    for i, a in enumerate(f.coeffs):
        if a == 0:
            continue
        for j, b in enumerate(g.coeffs):
            if b:
                out[i + j] += a * b
    return BinForm(tuple(out))


def power(f: BinForm, k: int) -> BinForm:
    out = constant(1)
    for _ in range(k):
        out = mul(out, f)
    return out


def content(f: BinForm) -> int:
    return kernels.content(f.coeffs)


def primitive(f: BinForm) -> BinForm:
    """Divide out the content and make the leading coefficient positive."""
    g = content(f)
    if g == 0:
        raise ParseError("zero form has no primitive part")
    coeffs = [c // g for c in f.coeffs]
    for c in coeffs:
        if c:
            if c < 0:
                coeffs = [-x for x in coeffs]
            break
    return BinForm(tuple(coeffs))


# ---------------------------------------------------------------------------
# sympy bridge


def to_poly(f: BinForm) -> sympy.Poly:
    d = f.degree
    expr = sum(int(c) * _S ** (d - k) * _T ** k for k, c in enumerate(f.coeffs))
    return sympy.Poly(expr, _S, _T, domain="ZZ")


def from_poly(p: sympy.Poly, degree: int | None = None) -> BinForm:
    if p.is_zero:
        if degree is None:
            raise ParseError("degree needed for the zero form")
        return zero(degree)
    d = p.total_degree()
    coeffs = [0] * (d + 1)
    for monom, c in p.terms():
        i, j = monom
        if i + j != d:
            raise ParseError("polynomial is not homogeneous")
        coeffs[j] = int(c)
    return BinForm(tuple(coeffs))


def form_gcd(forms) -> BinForm:
    """Primitive gcd (over Q, returned with integer content 1) of the
    nonzero forms in the list."""
    polys = [to_poly(f) for f in forms if not f.is_zero]
    if not polys:
        raise ParseError("gcd of all-zero list")
    g = polys[0]
    for p in polys[1:]:
        g = sympy.gcd(g, p)
        if g.total_degree() == 0:
            break
    return primitive(from_poly(sympy.Poly(g, _S, _T, domain="ZZ")))


def div_exact(f: BinForm, g: BinForm) -> BinForm:
    """Exact division (raises if not divisible over Q); result primitive
    scaling is NOT applied, integer coefficients enforced."""
    q, r = sympy.div(to_poly(f), to_poly(g), _S, _T)
    if not r.is_zero:
        raise ParseError("inexact binary-form division")
    return from_poly(sympy.Poly(q, _S, _T, domain="ZZ"), degree=f.degree - g.degree)


def distinct_places(f: BinForm):
    """Distinct projective roots of a nonzero binary form over Qbar.

    Returns (count, rational, irrational): the number of distinct roots,
    the rational roots as canonical primitive parameter pairs, and the
    irreducible witnesses of degree >= 2.
    """
    if f.is_zero:
        raise ParseError("zero form has every root")
    _, factors = sympy.factor_list(to_poly(f))
    count = 0
    rational = []
    irrational = []
    for poly, _mult in factors:
        bf = from_poly(sympy.Poly(poly, _S, _T, domain="ZZ"))
        d = bf.degree
        if d == 0:
            continue
        count += d
        if d == 1:
            # a*s + b*t vanishes at (s:t) = (-b : a)
            a, b = bf.coeffs
            rational.append(kernels.normalize_tuple((-b, a)))
        else:
            irrational.append(primitive(bf))
    rational.sort()
    return count, tuple(rational), tuple(irrational)


def compose(f: BinForm, m00: int, m01: int, m10: int, m11: int) -> BinForm:
    """Substitute (s, t) -> (m00 s + m01 t, m10 s + m11 t)."""
    if f.is_zero:
        return f
    a = BinForm((m00, m01))
    b = BinForm((m10, m11))
    d = f.degree
    out = zero(d)
    for k, c in enumerate(f.coeffs):
        if c == 0:
            continue
        term = scale(mul(power(a, d - k), power(b, k)), c)
        out = add(out, term)
    return out


def substitute_forms(g: HomForm, args) -> BinForm:
    """Pull a homogeneous n-variable form back along binary-form arguments.

    The result has degree deg(g) * d where d is the common argument
    degree; identically vanishing pullbacks come back as the zero form of
    that degree.
    """
    degs = {a.degree for a in args}
    if len(degs) != 1:
        raise ParseError("arguments of mixed degree")
    d = degs.pop()
    out = zero(g.degree * d)
    for e, c in g.terms:
        term = constant(c)
        for a, k in zip(args, e):
            if k:
                term = mul(term, power(a, k))
        out = add(out, term)
    return out


def parse_binform(text: str) -> BinForm:
    """Parse a binary form in the variables s, t (integer coefficients)."""
    poly = parse_poly_dict(text, ["s", "t"])
    if not poly:
        raise ParseError(f"zero form: {text!r}")
    degs = {sum(e) for e in poly}
    if len(degs) != 1:
        raise ParseError(f"not homogeneous: {text!r}")
    d = degs.pop()
    den = 1
    for c in poly.values():
        den = den * c.denominator // gcd(den, c.denominator)
    coeffs = [0] * (d + 1)
    for (i, j), c in poly.items():
        coeffs[j] = int(c * den)
    return BinForm(tuple(coeffs))
