"""Canonical projective points, homogeneous forms, subschemes and places.

Everything here is exact.  A projective point is stored in primitive
integer coordinates with the first nonzero coordinate positive, a form
carries content-normalized integer coefficients with its first (in term
order) coefficient positive, and evaluation is big-integer arithmetic.
Fixing these representatives is what turns the local closeness functions
of intpoints.weil into reproducible numbers.

Finite point sets are stored one component per point, each component
generated by the nonzero 2x2 minors against the point; unions of
subschemes are concatenations of components.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd

from sympy import isprime

from . import kernels
from .errors import DimensionMismatch, InvalidPoint, ParseError


# ---------------------------------------------------------------------------
# points


@dataclass(frozen=True)
class ProjPoint:
    """A rational projective point in canonical primitive-integer form."""

    coords: tuple[int, ...]

    def __post_init__(self):
        if not self.coords or all(c == 0 for c in self.coords):
            raise InvalidPoint("all coordinates are zero")
        if self.coords != kernels.normalize_tuple(self.coords):
            raise InvalidPoint(f"coordinates {self.coords} are not canonical")

    @property
    def dim(self) -> int:
        return len(self.coords) - 1

    def __str__(self):
        return "[" + ":".join(str(c) for c in self.coords) + "]"


def normalize_point(raw) -> ProjPoint:
    """Canonicalize a tuple of integers or rationals into a ProjPoint.

    Denominators are cleared, the gcd divided out, and the sign flipped
    so the first nonzero coordinate is positive.
    """
    vals = [Fraction(c) for c in raw]
    if not vals or all(v == 0 for v in vals):
        raise InvalidPoint("all coordinates are zero")
    den = 1
    for v in vals:
        den = den * v.denominator // gcd(den, v.denominator)
    ints = tuple(int(v * den) for v in vals)
    return ProjPoint(kernels.normalize_tuple(ints))


@dataclass(frozen=True)
class ModPoint:
    """Residue coordinates of a point modulo m >= 2."""

    modulus: int
    residues: tuple[int, ...]

    def __post_init__(self):
        if self.modulus < 2:
            raise InvalidPoint("modulus must be at least 2")


def reduce_point(P: ProjPoint, m: int) -> ModPoint:
    """Reduce the canonical coordinates of P modulo m."""
    if m < 2:
        raise InvalidPoint("modulus must be at least 2")
    return ModPoint(m, tuple(c % m for c in P.coords))


# ---------------------------------------------------------------------------
# places


@dataclass(frozen=True)
class Place:
    """A place of Q: Finite(p) for a prime p, or the archimedean place."""

    p: int | None  # None marks the archimedean place

    def __post_init__(self):
        if self.p is not None and not isprime(self.p):
            raise InvalidPoint(f"{self.p} is not prime")

    @property
    def is_arch(self) -> bool:
        return self.p is None

    def __str__(self):
        return "arch" if self.p is None else str(self.p)


ARCH = Place(None)


@lru_cache(maxsize=None)
def finite(p: int) -> Place:
    return Place(p)


def place_sort_key(v: Place):
    # finite places by prime, archimedean place last
    return (1, 0) if v.is_arch else (0, v.p)


# ---------------------------------------------------------------------------
# forms


@dataclass(frozen=True)
class HomForm:
    """A homogeneous integer form, content-normalized.

    Terms are stored as a sorted tuple of (exponent tuple, coefficient);
    every exponent tuple sums to the degree, the coefficient gcd is 1 and
    the first term's coefficient is positive.
    """

    nvars: int
    degree: int
    terms: tuple[tuple[tuple[int, ...], int], ...]

    def __post_init__(self):
        if not self.terms:
            raise InvalidPoint("zero form forbidden")
        for e, c in self.terms:
            if len(e) != self.nvars or sum(e) != self.degree or c == 0:
                raise InvalidPoint(f"bad term {e}: {c}")
        if kernels.content([c for _, c in self.terms]) != 1:
            raise InvalidPoint("form is not content-normalized")
        if self.terms[0][1] < 0:
            raise InvalidPoint("leading coefficient must be positive")
        if tuple(sorted(self.terms, reverse=True)) != self.terms:
            raise InvalidPoint("terms not in canonical order")

    @property
    def coeff_abs_sum(self) -> int:
        return sum(abs(c) for _, c in self.terms)

    def __str__(self):
        return format_form(self)


def make_form(nvars: int, term_map) -> HomForm:
    """Build a canonical HomForm from an exponent->coefficient mapping."""
    items = [(tuple(e), int(c)) for e, c in term_map.items() if c != 0]
    if not items:
        raise InvalidPoint("zero form forbidden")
    g = kernels.content([c for _, c in items])
    items = [(e, c // g) for e, c in items]
    items.sort(reverse=True)
    if items[0][1] < 0:
        items = [(e, -c) for e, c in items]
    degrees = {sum(e) for e, _ in items}
    if len(degrees) != 1:
        raise InvalidPoint("form is not homogeneous")
    return HomForm(nvars, degrees.pop(), tuple(items))


def evaluate_form(f: HomForm, P: ProjPoint) -> int:
    """Exact value of f at the canonical primitive coordinates of P."""
    if f.nvars != len(P.coords):
        raise DimensionMismatch(f"form in {f.nvars} variables, point in {len(P.coords)}")
    return evaluate_at_tuple(f, P.coords)


def evaluate_at_tuple(f: HomForm, coords) -> int:
    """Evaluate f at a raw integer tuple (no canonicalization)."""
    return kernels.eval_terms(
        tuple(c for _, c in f.terms), tuple(e for e, _ in f.terms), tuple(coords)
    )


# ---------------------------------------------------------------------------
# subschemes


@dataclass(frozen=True)
class Subscheme:
    """A finite union of components, each a tuple of generating forms.

    The empty union (no components) is the empty subscheme: every local
    value against it is trivial.  codim is optional declared metadata
    used by pipelines that require codimension at least two.
    """

    nvars: int
    components: tuple[tuple[HomForm, ...], ...]
    codim: int | None = None

    def __post_init__(self):
        for comp in self.components:
            if not comp:
                raise InvalidPoint("component with no generators")
            for g in comp:
                if g.nvars != self.nvars:
                    raise DimensionMismatch("generator in wrong variable count")
        if self.codim is not None and self.codim < 1:
            raise InvalidPoint("declared codimension must be >= 1")

    @property
    def dim_ambient(self) -> int:
        return self.nvars - 1


def empty_subscheme(nvars: int) -> Subscheme:
    return Subscheme(nvars, ())


def union(*schemes: Subscheme) -> Subscheme:
    """Union as component concatenation (the max rule is then automatic)."""
    nv = {X.nvars for X in schemes}
    if len(nv) != 1:
        raise DimensionMismatch("union of subschemes in different spaces")
    comps = tuple(c for X in schemes for c in X.components)
    codims = [X.codim for X in schemes if X.components]
    codim = min(codims) if codims and all(c is not None for c in codims) else None
    return Subscheme(nv.pop(), comps, codim)


def point_ideal(T: ProjPoint) -> Subscheme:
    """The ideal of the single point T, generated by 2x2 minors.

    For each index pair i < j with (T_i, T_j) != (0, 0) the minor
    T_j x_i - T_i x_j survives; the vanishing locus of the collection is
    exactly {T}.
    """
    n = len(T.coords)
    gens = []
    for i in range(n):
        for j in range(i + 1, n):
            yi, yj = T.coords[i], T.coords[j]
            if yi == 0 and yj == 0:
                continue
            e_i = tuple(1 if k == i else 0 for k in range(n))
            e_j = tuple(1 if k == j else 0 for k in range(n))
            g = make_form(n, {e_i: yj, e_j: -yi})
            if g not in gens:
                gens.append(g)
    return Subscheme(n, (tuple(gens),), codim=n - 1)


def points_subscheme(Ts) -> Subscheme:
    """One point-ideal component per distinct point of the input list."""
    Ts = list(Ts)
    if not Ts:
        raise InvalidPoint("empty point list")
    if len({len(T.coords) for T in Ts}) != 1:
        raise DimensionMismatch("points of mixed dimension")
    seen = []
    for T in Ts:
        if T not in seen:
            seen.append(T)
    comps = tuple(point_ideal(T).components[0] for T in seen)
    return Subscheme(len(seen[0].coords), comps, codim=len(seen[0].coords) - 1)


# ---------------------------------------------------------------------------
# enumeration helper


def canonical_points(dim: int, max_height: int):
    """Yield all canonical primitive points of P^dim with height <= bound.

    Height is max |x_i|; points appear ordered by height and then
    lexicographically by coordinates.  Deterministic by construction.
    """
    n = dim + 1
    for h in range(1, max_height + 1):
        box = range(-h, h + 1)

        def rec(prefix, touched):
            if len(prefix) == n:
                if touched and kernels.content(prefix) == 1:
                    tup = tuple(prefix)
                    if kernels.normalize_tuple(tup) == tup:
                        yield ProjPoint(tup)
                return
            for c in box:
                yield from rec(prefix + [c], touched or abs(c) == h)

        yield from rec([], False)


# ---------------------------------------------------------------------------
# text fixtures: points and forms

_POINT_RE = re.compile(r"^\[(.*)\]$")


def parse_point(text: str) -> ProjPoint:
    """Parse '[a:b:c]' with integer or rational entries."""
    m = _POINT_RE.match(text.strip())
    if not m:
        raise ParseError(f"not a point: {text!r}")
    parts = m.group(1).split(":")
    try:
        vals = [Fraction(p.strip()) for p in parts]
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad coordinate in {text!r}: {exc}") from None
    return normalize_point(vals)


def format_point(P: ProjPoint) -> str:
    return str(P)


_TOKEN_RE = re.compile(r"\s*(\d+|[A-Za-z]\w*|\*\*|[-+*/^()])")


def _tokenize(text):
    pos, out = 0, []
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character at {text[pos:]!r}")
        out.append(m.group(1))
        pos = m.end()
    return out


class _FormParser:
    """Recursive-descent parser for polynomial strings in x0..xn (or s,t)."""

    def __init__(self, tokens, varnames):
        self.toks = tokens
        self.i = 0
        self.varnames = varnames

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    # polynomials are dicts exponent-tuple -> Fraction
    def parse(self):
        poly = self.expr()
        if self.peek() is not None:
            raise ParseError(f"trailing tokens near {self.peek()!r}")
        return poly

    def expr(self):
        if self.peek() in ("+", "-"):
            sign = -1 if self.take() == "-" else 1
            acc = _scale(self.term(), sign)
        else:
            acc = self.term()
        while self.peek() in ("+", "-"):
            sign = -1 if self.take() == "-" else 1
            acc = _add(acc, _scale(self.term(), sign))
        return acc

    def term(self):
        acc = self.factor()
        while self.peek() in ("*", "/"):
            op = self.take()
            rhs = self.factor()
            if op == "*":
                acc = _mul(acc, rhs, len(self.varnames))
            else:
                const = _constant_of(rhs, len(self.varnames))
                if const is None or const == 0:
                    raise ParseError("division only by nonzero constants")
                acc = _scale(acc, Fraction(1) / const)
        return acc

    def factor(self):
        base = self.atom()
        if self.peek() in ("^", "**"):
            self.take()
            tok = self.take()
            if tok is None or not tok.isdigit():
                raise ParseError("exponent must be a nonnegative integer")
            out = {(0,) * len(self.varnames): Fraction(1)}
            for _ in range(int(tok)):
                out = _mul(out, base, len(self.varnames))
            return out
        return base

    def atom(self):
        tok = self.take()
        if tok is None:
            raise ParseError("unexpected end of input")
        if tok == "(":
            inner = self.expr()
            if self.take() != ")":
                raise ParseError("unbalanced parenthesis")
            return inner
        if tok == "-":
            return _scale(self.factor(), -1)
        if tok.isdigit():
            return {(0,) * len(self.varnames): Fraction(tok)}
        if tok in self.varnames:
            k = self.varnames.index(tok)
            e = tuple(1 if i == k else 0 for i in range(len(self.varnames)))
            return {e: Fraction(1)}
        raise ParseError(f"unknown variable {tok!r}")


def _constant_of(poly, nvars):
    zero = (0,) * nvars
    if set(poly) <= {zero}:
        return poly.get(zero, Fraction(0))
    return None


def _add(a, b):
    out = dict(a)
    for e, c in b.items():
        out[e] = out.get(e, Fraction(0)) + c
        if out[e] == 0:
            del out[e]
    return out


def _scale(a, s):
    return {e: c * s for e, c in a.items()}


def _mul(a, b, nvars):
    out = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            out[e] = out.get(e, Fraction(0)) + ca * cb
    return {e: c for e, c in out.items() if c != 0}


def parse_poly_dict(text: str, varnames) -> dict:
    """Parse to an exponent->Fraction dict (shared by form and curve parsers)."""
    return _FormParser(_tokenize(text), list(varnames)).parse()


def parse_form(text: str, nvars: int | None = None, varnames=None) -> HomForm:
    """Parse a homogeneous polynomial string into a canonical HomForm.

    Default variables are x0..xn; rational coefficients are cleared to a
    primitive integer form.
    """
    if varnames is None:
        if nvars is None:
            used = sorted(set(int(v) for v in re.findall(r"x(\d+)", text)))
            nvars = (used[-1] + 1) if used else 1
        varnames = [f"x{i}" for i in range(nvars)]
    poly = parse_poly_dict(text, varnames)
    if not poly:
        raise ParseError(f"zero form: {text!r}")
    den = 1
    for c in poly.values():
        den = den * c.denominator // gcd(den, c.denominator)
    return make_form(len(varnames), {e: int(c * den) for e, c in poly.items()})


@lru_cache(maxsize=None)
def _var_name(nvars, i):
    return f"x{i}"


def format_form(f: HomForm) -> str:
    parts = []
    for e, c in f.terms:
        mono = "*".join(
            (_var_name(f.nvars, i) if k == 1 else f"{_var_name(f.nvars, i)}^{k}")
            for i, k in enumerate(e)
            if k
        )
        if mono:
            body = mono if abs(c) == 1 else f"{abs(c)}*{mono}"
        else:
            body = str(abs(c))
        parts.append(("- " if c < 0 else "+ ") + body)
    out = " ".join(parts)
    return out[2:] if out.startswith("+ ") else "-" + out[2:]
