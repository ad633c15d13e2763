"""Integral-point searches on parametrized genus-zero curves.

The finite-place side is handled by congruence classes on the parameter
line (with a self-certifying modulus-escalation contract) and the
archimedean side by enumerate-and-verify: parameters are scanned by
height inside the congruence class and every candidate is re-verified by
intpoints.weil.verify_point, which is the sole trust anchor.  The
S-integral variants reparametrize the punctured line to an additive or
multiplicative coordinate and walk translates or S-unit multiples of the
seed parameter.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from . import binforms, kernels
from .binforms import BinForm
from .errors import (
    BadPunctureCount,
    BaseNotIntegral,
    Exhausted,
    IntersectsD,
    IrrationalPunctures,
    ParseError,
    TooManyPunctures,
    UnitsFinite,
)
from .projgeom import ARCH, ProjPoint, Subscheme, normalize_point, union
from .weil import LevelVector, WeilReport, verify_point

MANY = "many"


# ---------------------------------------------------------------------------
# curve maps


@dataclass(frozen=True)
class CurveMap:
    """A rational map P^1 -> P^n given by binary forms of one degree.

    The tuple is jointly content-normalized and carries no common binary
    factor; individual coordinates may be zero.
    """

    forms: tuple[BinForm, ...]

    @property
    def degree(self) -> int:
        return self.forms[0].degree

    @property
    def nvars(self) -> int:
        return len(self.forms)

    def __call__(self, s: int, t: int):
        return tuple(f(s, t) for f in self.forms)


def curve_map(forms) -> CurveMap:
    """Normalize and validate a tuple of coordinate forms."""
    forms = list(forms)
    if len({f.degree for f in forms}) != 1:
        raise ParseError("coordinate forms of mixed degree")
    if all(f.is_zero for f in forms):
        raise ParseError("all coordinate forms vanish")
    g = binforms.form_gcd(forms)
    if g.degree > 0:
        forms = [
            binforms.zero(f.degree - g.degree) if f.is_zero else binforms.div_exact(f, g)
            for f in forms
        ]
    c = kernels.content([x for f in forms for x in f.coeffs])
    sign = 0
    for f in forms:
        for x in f.coeffs:
            if x:
                sign = 1 if x > 0 else -1
                break
        if sign:
            break
    forms = [BinForm(tuple(sign * (x // c) for x in f.coeffs)) for f in forms]
    return CurveMap(tuple(forms))


def map_point(phi: CurveMap, param) -> ProjPoint:
    s, t = param
    return normalize_point(phi(s, t))


def reparametrize(phi: CurveMap, m00, m01, m10, m11) -> CurveMap:
    """Compose with the parameter substitution (s,t) -> M(s,t)."""
    if m00 * m11 - m01 * m10 == 0:
        raise ParseError("parameter change must be invertible")
    return curve_map([binforms.compose(f, m00, m01, m10, m11) for f in phi.forms])


# ---------------------------------------------------------------------------
# intersection with a subscheme


@dataclass(frozen=True)
class PunctureData:
    """Places of the parameter line lying over a subscheme.

    count is the number of distinct points over Qbar (None when the curve
    lies inside some component, so the intersection is everything);
    rational roots are canonical parameter pairs, irrational roots are
    witnessed by their irreducible binary forms.
    """

    count: int | None
    rational: tuple[tuple[int, int], ...] = ()
    irrational: tuple[BinForm, ...] = ()

    @property
    def kind(self) -> str:
        if self.count is None or self.count > 2:
            return MANY
        return ("empty", "one", "two")[self.count]


def pullback(D: Subscheme, phi: CurveMap):
    """Per-component lists of the generators composed with the map."""
    if D.nvars != phi.nvars:
        raise ParseError("subscheme and curve live in different spaces")
    return [
        [binforms.substitute_forms(g, phi.forms) for g in comp]
        for comp in D.components
    ]


def curve_meets(D: Subscheme, phi: CurveMap) -> PunctureData:
    """Intersection of the image curve with D, as places of P^1.

    Per component the pulled-back generators have a binary-form gcd; the
    intersection is empty exactly when every such gcd is a nonzero
    constant, and otherwise the punctures are the distinct roots of the
    product of the nonconstant gcds.
    """
    product = binforms.constant(1)
    for comp_forms in pullback(D, phi):
        nonzero = [f for f in comp_forms if not f.is_zero]
        if not nonzero:
            return PunctureData(count=None)
        g = binforms.form_gcd(nonzero)
        if g.degree > 0:
            product = binforms.mul(product, g)
    if product.degree == 0:
        return PunctureData(count=0)
    count, rational, irrational = binforms.distinct_places(product)
    return PunctureData(count=count, rational=rational, irrational=irrational)


# ---------------------------------------------------------------------------
# parameter enumeration and projective congruence


def param_pairs(max_height: int):
    """Canonical primitive parameter pairs ordered by height then lex."""
    for h in range(1, max_height + 1):
        shell = []
        for s in range(-h, h + 1):
            for t in (-h, h) if abs(s) != h else range(-h, h + 1):
                pair = (s, t)
                if gcd(s, t) != 1:
                    continue
                if kernels.normalize_tuple(pair) != pair:
                    continue
                shell.append(pair)
        yield from sorted(shell)


def proj_congruent(pair, base, modulus_factors) -> bool:
    """Projective congruence of parameter pairs modulo N = prod p^k.

    True when some unit lambda mod N scales base onto pair; checked prime
    power by prime power.
    """
    s, t = pair
    s0, t0 = base
    for p, k in modulus_factors:
        q = p ** k
        if s0 % p != 0:
            piv, oth, cpiv, coth = s0, t0, s, t
        else:
            piv, oth, cpiv, coth = t0, s0, t, s
        if cpiv % p == 0:
            return False
        lam = cpiv * pow(piv, -1, q) % q
        if (coth - lam * oth) % q != 0:
            return False
    return True


# ---------------------------------------------------------------------------
# modulus schedule


def choose_modulus(D: Subscheme, phi: CurveMap, base, levels: LevelVector, escalation=None) -> int:
    """Initial congruence modulus prod p^(e_p + c_p), c_p starting at 1.

    The escalation contract: callers re-verify every candidate and bump
    c_p when a candidate fails at the support prime p.  The seed must
    verify at the levels with only the archimedean place exempt.
    """
    report = verify_point(D, map_point(phi, base), levels, S={ARCH})
    if not report.verdict:
        raise BaseNotIntegral(f"seed parameter {base} fails at {levels}")
    return _modulus(levels, escalation or {})


def _modulus(levels: LevelVector, escalation) -> int:
    N = 1
    for p, e in levels.finite:
        N *= p ** (e + escalation.get(p, 1))
    return N


def _modulus_factors(levels: LevelVector, escalation):
    return tuple((p, e + escalation.get(p, 1)) for p, e in levels.finite)


# ---------------------------------------------------------------------------
# results


@dataclass(frozen=True)
class FoundPoint:
    """A verified search hit with its parameter and verification record."""

    point: ProjPoint
    param: tuple[int, int]
    levels: LevelVector
    report: WeilReport


# ---------------------------------------------------------------------------
# the everywhere-integral search


def search_genus0(
    phi: CurveMap,
    D: Subscheme,
    base,
    levels: LevelVector,
    want: int,
    cap: int = 400,
) -> list[FoundPoint]:
    """Points of the image curve verifying at the levels, all places.

    Parameters congruent to the seed modulo the escalating modulus are
    scanned by height; every candidate is re-verified with S empty and
    only passes are emitted, in deterministic order, until `want` are
    found or the height cap raises Exhausted with the partial list.
    """
    base = kernels.normalize_tuple(tuple(base))
    meets = curve_meets(D, phi)
    if meets.kind != "empty":
        raise IntersectsD(f"curve meets the avoided set ({meets.kind} punctures)")
    base_report = verify_point(D, map_point(phi, base), levels, S=frozenset())
    if not base_report.verdict:
        raise BaseNotIntegral(f"seed fails verification at {levels}")

    escalation: dict[int, int] = {}
    factors = _modulus_factors(levels, escalation)
    support = set(levels.support)
    hits: list[FoundPoint] = []
    seen: set[ProjPoint] = set()

    for pair in param_pairs(cap):
        if not proj_congruent(pair, base, factors):
            continue
        Q = map_point(phi, pair)
        if Q in seen:
            continue
        report = verify_point(D, Q, levels, S=frozenset())
        if report.verdict:
            seen.add(Q)
            hits.append(FoundPoint(Q, pair, levels, report))
            if len(hits) >= want:
                return hits
            continue
        bumped = False
        for v in report.offending:
            if not v.is_arch and v.p in support:
                escalation[v.p] = escalation.get(v.p, 1) + 1
                bumped = True
        if bumped:
            factors = _modulus_factors(levels, escalation)
    raise Exhausted(f"cap {cap} reached with {len(hits)}/{want} points", hits)


# ---------------------------------------------------------------------------
# the S-integral search


def _unit_sequence(s_primes, max_height):
    """Deterministic walk of the S-unit group {+-1} x prod p^Z by height."""
    yield Fraction(1)
    yield Fraction(-1)
    for h in range(1, max_height + 1):
        shell = []

        def rec(prefix):
            if len(prefix) == len(s_primes):
                if any(abs(e) == h for e in prefix):
                    shell.append(tuple(prefix))
                return
            for e in range(-h, h + 1):
                rec(prefix + [e])

        rec([])
        for exps in sorted(shell):
            w = Fraction(1)
            for p, e in zip(s_primes, exps):
                w *= Fraction(p) ** e
            yield w
            yield -w


def search_s_integral(
    phi: CurveMap,
    Dprime: Subscheme,
    N: Subscheme,
    S,
    base,
    levels: LevelVector,
    want: int,
    cap: int = 400,
) -> list[FoundPoint]:
    """S-integral points on a curve puncturing the divisor part.

    The curve must avoid N entirely and meet Dprime in one or two
    rational places.  After moving the punctures to (1:0) (one-puncture,
    additive case) or {(1:0), (0:1)} (two-puncture, multiplicative case),
    candidates are modulus translates of the seed, respectively S-unit
    multiples; each candidate is re-verified against the union of Dprime
    and N at every place outside S.
    """
    S = frozenset(S)
    base = kernels.normalize_tuple(tuple(base))
    if not any(v.is_arch for v in S):
        raise BadPunctureCount("S must contain the archimedean place")
    meetsN = curve_meets(N, phi)
    if meetsN.kind != "empty":
        raise IntersectsD("curve meets the codimension-two part")
    pd = curve_meets(Dprime, phi)
    if pd.kind == MANY:
        raise TooManyPunctures(f"{pd.count} places on the divisor part")
    if pd.count == 0:
        raise BadPunctureCount("no punctures; use search_genus0")
    if pd.irrational:
        raise IrrationalPunctures(f"conjugate punctures: {pd.irrational[0]}")

    L = union(Dprime, N) if N.components else Dprime
    base_report = verify_point(L, map_point(phi, base), levels, S=S)
    if not base_report.verdict:
        raise BaseNotIntegral(f"seed fails verification at {levels}")

    checked = levels.without_places(S)
    hits: list[FoundPoint] = []
    seen: set[ProjPoint] = set()

    def try_param(pair):
        pair = kernels.normalize_tuple(pair)
        Q = map_point(phi_std, pair)
        if Q in seen:
            return
        report = verify_point(L, Q, levels, S=S)
        if report.verdict:
            seen.add(Q)
            hits.append(FoundPoint(Q, pair, levels, report))

    if pd.count == 1:
        (pu,) = pd.rational
        if base == pu:
            raise BaseNotIntegral("seed parameter is the puncture")
        phi_std = reparametrize(phi, pu[0], base[0], pu[1], base[1])
        # seed now at (0:1); additive coordinate u = s/t, puncture at infinity
        Nmod = _modulus(checked, {})
        for k in _alternating(cap):
            try_param((k * Nmod, 1))
            if len(hits) >= want:
                return hits
    else:
        pu1, pu2 = pd.rational
        s_primes = tuple(sorted(v.p for v in S if not v.is_arch))
        if not s_primes:
            raise UnitsFinite("two punctures need a finite place in S; units of Z are {+-1}")
        phi_std = reparametrize(phi, pu1[0], pu2[0], pu1[1], pu2[1])
        # seed in the new coordinates via the adjugate
        det = pu1[0] * pu2[1] - pu2[0] * pu1[1]
        if det == 0:
            raise IrrationalPunctures("punctures coincide")
        a = pu2[1] * base[0] - pu2[0] * base[1]
        b = -pu1[1] * base[0] + pu1[0] * base[1]
        if a == 0 or b == 0:
            raise BaseNotIntegral("seed parameter is a puncture")
        u0 = Fraction(a, b)
        for w in _unit_sequence(s_primes, cap):
            u = u0 * w
            try_param((u.numerator, u.denominator))
            if len(hits) >= want:
                return hits
    raise Exhausted(f"cap {cap} reached with {len(hits)}/{want} points", hits)


def _alternating(cap: int):
    yield 0
    for k in range(1, cap + 1):
        yield k
        yield -k
