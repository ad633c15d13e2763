"""Exact local closeness functions and the four notions of integrality.

The canonical multiplicative representative used throughout is

    L_{D,v}(P) = max over components C of D of
                 min over generators g of C of (max_j |x_j|_v)^{deg g} / |g(x)|_v

evaluated on the primitive coordinates x of P.  At a finite place p this
collapses to p^{v_p(g(x))} (primitive coordinates make the numerator 1),
so the value is an exact prime power; at the archimedean place it is an
exact positive rational.  A point lying on some component makes the value
infinite there.

Levels are multiplicative bounds L_{D,v}(P) <= t_v with finite support at
the finite places; verify_point is the single trust anchor every search
pipeline re-checks its output against.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from sympy import factorint, isprime, nextprime

from . import kernels
from .errors import DimensionMismatch, InvalidPoint, MissingArchLevel, OnSubscheme
from .projgeom import (
    ARCH,
    Place,
    ProjPoint,
    Subscheme,
    evaluate_form,
    finite,
    place_sort_key,
    points_subscheme,
)

# ---------------------------------------------------------------------------
# values and levels


@dataclass(frozen=True)
class WeilValue:
    """Value of the closeness function at one place; None means infinite."""

    place: Place
    value: Fraction | None

    @property
    def infinite(self) -> bool:
        return self.value is None

    def finite_exponent(self) -> int:
        """The exponent m with value = p^m at a finite place."""
        if self.place.is_arch or self.value is None:
            raise ValueError("finite_exponent needs a finite value at a finite place")
        if self.value == 1:
            return 0
        return kernels.vp(self.value.numerator, self.place.p)

    def __str__(self):
        if self.value is None:
            return "inf"
        if not self.place.is_arch:
            return f"{self.place.p}^{self.finite_exponent()}"
        return str(self.value)


@dataclass(frozen=True)
class LevelVector:
    """Multiplicative bounds: prime -> exponent e_p (bound p^e_p), plus an
    optional archimedean bound t >= 0.  Zero exponents are dropped, so the
    finite support is the stored key set."""

    finite: tuple[tuple[int, int], ...] = ()
    arch: Fraction | None = None

    def __post_init__(self):
        seen = set()
        for p, e in self.finite:
            if not isprime(p) or e < 1 or p in seen:
                raise InvalidPoint(f"bad level entry {p}^{e}")
            seen.add(p)
        if list(self.finite) != sorted(self.finite):
            raise InvalidPoint("finite levels must be sorted by prime")
        if self.arch is not None and self.arch < 0:
            raise InvalidPoint("archimedean level must be nonnegative")

    @classmethod
    def of(cls, finite_map=None, arch=None) -> "LevelVector":
        items = tuple(sorted((int(p), int(e)) for p, e in (finite_map or {}).items() if e > 0))
        return cls(items, None if arch is None else Fraction(arch))

    def exponent(self, p: int) -> int:
        return dict(self.finite).get(p, 0)

    def bound(self, v: Place) -> Fraction | None:
        if v.is_arch:
            return self.arch
        return Fraction(v.p) ** self.exponent(v.p)

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.finite)

    def merge_max(self, other: "LevelVector") -> "LevelVector":
        fin = dict(self.finite)
        for p, e in other.finite:
            fin[p] = max(fin.get(p, 0), e)
        if self.arch is None or other.arch is None:
            arch = self.arch if other.arch is None else other.arch
        else:
            arch = max(self.arch, other.arch)
        return LevelVector.of(fin, arch)

    def without_places(self, S) -> "LevelVector":
        sp = {v.p for v in S if not v.is_arch}
        fin = {p: e for p, e in self.finite if p not in sp}
        arch = None if any(v.is_arch for v in S) else self.arch
        return LevelVector.of(fin, arch)

    def __str__(self):
        parts = [f"{p}:{e}" for p, e in self.finite]
        if self.arch is not None:
            parts.append(f"arch:{self.arch}")
        return ",".join(parts) if parts else "trivial"


# ---------------------------------------------------------------------------
# the canonical representative


def _component_value(comp, P: ProjPoint, v: Place) -> Fraction | None:
    vals = [evaluate_form(g, P) for g in comp]
    if all(x == 0 for x in vals):
        return None
    if v.is_arch:
        H = max(abs(c) for c in P.coords)
        best = None
        for g, x in zip(comp, vals):
            if x == 0:
                continue
            q = Fraction(H ** g.degree, abs(x))
            if best is None or q < best:
                best = q
        return best
    m = kernels.min_valuation(vals, v.p)
    return Fraction(v.p) ** m


def local_weil(D: Subscheme, P: ProjPoint, v: Place) -> WeilValue:
    """The canonical local value of P against D at the place v.

    Infinite exactly when P lies on some component of D.  The empty
    subscheme gives the trivial value 1 everywhere.
    """
    if D.nvars != len(P.coords):
        raise DimensionMismatch("subscheme and point dimensions differ")
    best = Fraction(1)
    for comp in D.components:
        val = _component_value(comp, P, v)
        if val is None:
            return WeilValue(v, None)
        if val > best:
            best = val
    return WeilValue(v, best)


# ---------------------------------------------------------------------------
# support and factorization

_TRIAL_BOUND = 10000


def _default_factor(n: int) -> tuple[int, ...]:
    """Distinct prime divisors: trial division, primality check, then a
    full factorization fallback for any stubborn cofactor."""
    n = abs(n)
    out = []
    for p in (2, 3):
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
    q = 5
    while q * q <= n and q <= _TRIAL_BOUND:
        if n % q == 0:
            out.append(q)
            while n % q == 0:
                n //= q
        q += 2
    if n > 1:
        if isprime(n):
            out.append(n)
        else:
            out.extend(int(p) for p in factorint(n))
    return tuple(sorted(set(out)))


_factorizer = _default_factor


def set_factorizer(fn) -> None:
    """Swap the prime-divisor routine (must return distinct primes)."""
    global _factorizer
    _factorizer = fn


def support_places(D: Subscheme, P: ProjPoint) -> tuple[Place, ...]:
    """The finite places where the value against D exceeds 1.

    These are exactly the primes dividing, for some component, the gcd of
    the generator values at P.  Raises OnSubscheme when P lies on D.
    """
    if D.nvars != len(P.coords):
        raise DimensionMismatch("subscheme and point dimensions differ")
    primes: set[int] = set()
    for comp in D.components:
        vals = [evaluate_form(g, P) for g in comp]
        g = kernels.content(vals)
        if g == 0:
            raise OnSubscheme(f"{P} lies on a component of the subscheme")
        if g > 1:
            primes.update(_factorizer(g))
    return tuple(finite(p) for p in sorted(primes))


def minimal_levels(D: Subscheme, P: ProjPoint) -> LevelVector:
    """The smallest LevelVector under which P verifies with S empty."""
    sup = support_places(D, P)
    fin = {v.p: local_weil(D, P, v).finite_exponent() for v in sup}
    arch = local_weil(D, P, ARCH).value
    return LevelVector.of(fin, arch)


# ---------------------------------------------------------------------------
# verification


@dataclass(frozen=True)
class WeilReport:
    """Per-place values of one point and the pass/fail verdict."""

    point: ProjPoint
    levels: LevelVector
    values: tuple[WeilValue, ...]
    verdict: bool
    offending: tuple[Place, ...]


def verify_point(D: Subscheme, P: ProjPoint, levels: LevelVector, S=frozenset()) -> WeilReport:
    """Check L_{D,v}(P) <= level(v) for every place v outside S.

    Unlisted finite places carry level 1, so the finite check reduces to
    support containment in the level support.  The archimedean place is
    checked unless it belongs to S; an absent archimedean level with the
    archimedean place constrained is a fail-fast error.
    """
    S = frozenset(S)
    arch_exempt = any(v.is_arch for v in S)
    if not arch_exempt and levels.arch is None:
        raise MissingArchLevel("archimedean place constrained but no level given")
    s_fin = {v.p for v in S if not v.is_arch}

    try:
        sup = support_places(D, P)
        on_d = False
    except OnSubscheme:
        sup = ()
        on_d = True

    places = sorted(
        {finite(p) for p in levels.support} | set(sup),
        key=place_sort_key,
    )
    if not arch_exempt:
        places = places + [ARCH]

    values = []
    offending = []
    for v in places:
        w = local_weil(D, P, v)
        values.append(w)
        if not v.is_arch and v.p in s_fin:
            continue
        bound = levels.bound(v)
        if w.value is None or (bound is not None and w.value > bound):
            offending.append(v)

    if on_d and not offending:
        # everything checked was exempt; name a deterministic finite witness
        q = 2
        while q in s_fin:
            q = int(nextprime(q))
        witness = finite(q)
        values.append(WeilValue(witness, None))
        offending.append(witness)

    return WeilReport(P, levels, tuple(values), not offending, tuple(offending))


# ---------------------------------------------------------------------------
# classification of finite point sets


@dataclass(frozen=True)
class SetClassification:
    """One record covering the four notions of integrality on a finite set.

    classical_everywhere: every finite-place value equals 1.
    classical_outside_s: every finite-place value outside S equals 1.
    everywhere_witness:  pointwise-max levels over the sample (all places).
    s_witness:           same with places of S ignored.
    """

    n_points: int
    classical_everywhere: bool
    classical_outside_s: bool
    everywhere_witness: LevelVector
    s_witness: LevelVector
    support_union: tuple[int, ...]
    per_point: tuple[tuple[ProjPoint, LevelVector], ...]


def classify_set(points, D: Subscheme, S=frozenset()) -> SetClassification:
    """Classify a finite point set against all four integrality notions."""
    points = list(points)
    if not points:
        raise InvalidPoint("empty point list")
    S = frozenset(S)
    s_fin = {v.p for v in S if not v.is_arch}
    per_point = []
    witness = LevelVector.of()
    for P in points:
        lv = minimal_levels(D, P)
        per_point.append((P, lv))
        witness = witness.merge_max(lv)
    support = witness.support
    classical_everywhere = not support
    classical_outside_s = all(p in s_fin for p in support)
    return SetClassification(
        n_points=len(points),
        classical_everywhere=classical_everywhere,
        classical_outside_s=classical_outside_s,
        everywhere_witness=witness,
        s_witness=witness.without_places(S),
        support_union=support,
        per_point=tuple(per_point),
    )


# ---------------------------------------------------------------------------
# independent oracle for finite point sets


def oracle_weil_points(Ts, P: ProjPoint, v: Place) -> WeilValue:
    """Projective-distance value of P against a finite point set at a
    finite place, computed directly from coordinate minors.

    Independent of local_weil / points_subscheme: no forms are built; the
    minor values are normalized by the coordinate-pair gcd inline.  Must
    agree exactly with the component-max evaluation.
    """
    if v.is_arch:
        raise ValueError("oracle implemented for finite places only")
    from math import gcd

    best = 0
    for T in Ts:
        if len(T.coords) != len(P.coords):
            raise DimensionMismatch("point dimensions differ")
        m = None
        n = len(T.coords)
        for i in range(n):
            for j in range(i + 1, n):
                yi, yj = T.coords[i], T.coords[j]
                if yi == 0 and yj == 0:
                    continue
                val = P.coords[i] * yj - P.coords[j] * yi
                val //= gcd(yi, yj)
                if val == 0:
                    continue
                w = kernels.vp(val, v.p)
                if m is None or w < m:
                    m = w
        if m is None:
            raise OnSubscheme(f"{P} coincides with a target point")
        best = max(best, m)
    return WeilValue(v, Fraction(v.p) ** best)


__all__ = [
    "WeilValue",
    "LevelVector",
    "WeilReport",
    "SetClassification",
    "local_weil",
    "support_places",
    "minimal_levels",
    "verify_point",
    "classify_set",
    "oracle_weil_points",
    "set_factorizer",
    "points_subscheme",
]
