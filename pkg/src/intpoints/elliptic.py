"""Exact elliptic-curve arithmetic over Q and Q(t), and the genus-one
integral-point search.

Curves are short Weierstrass y^2 = x^3 + Ax + B with integer A, B; points
carry exact rational coordinates.  Non-torsion certification scans the
first twelve multiples (rational torsion has order at most 12), and the
congruence side of the search works modulo odd good-reduction primes
through the identity-neighborhood criterion v_p(x) <= -2e.  The
archimedean side is enumerate-and-verify over multiples of the generator:
the scan cap is explicit and exhaustion is reported, never silent.

Surfaces are Weierstrass families over Q(t) with a marked section; the
fraction-field arithmetic is exact (sympy's QQ(t)).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import sympy

from . import kernels
from .errors import (
    BadModulus,
    BaseNotIntegral,
    DegenerateSection,
    Exhausted,
    InvalidPoint,
    SectionPole,
    SingularFiber,
    TorsionGenerator,
)
from .errors import OnSubscheme
from .projgeom import ARCH, ProjPoint, Subscheme, normalize_point
from .weil import LevelVector, WeilReport, local_weil, minimal_levels, verify_point

# ---------------------------------------------------------------------------
# curves and points over Q


@dataclass(frozen=True)
class EllCurveQ:
    """y^2 = x^3 + A x + B with integer coefficients and nonzero discriminant."""

    A: int
    B: int

    def __post_init__(self):
        if self.discriminant == 0:
            raise InvalidPoint("singular Weierstrass equation")

    @property
    def discriminant(self) -> int:
        return -16 * (4 * self.A ** 3 + 27 * self.B ** 2)

    def contains(self, P: "EllPoint") -> bool:
        if P.is_identity:
            return True
        return P.y * P.y == P.x ** 3 + self.A * P.x + self.B

    def __str__(self):
        return f"y^2 = x^3 + {self.A}*x + {self.B}"


@dataclass(frozen=True)
class EllPoint:
    """Identity, or an affine point with exact rational coordinates."""

    x: Fraction | None
    y: Fraction | None

    @property
    def is_identity(self) -> bool:
        return self.x is None

    def __str__(self):
        return "O" if self.is_identity else f"({self.x}, {self.y})"


IDENTITY = EllPoint(None, None)


def affine(x, y) -> EllPoint:
    return EllPoint(Fraction(x), Fraction(y))


def _require_on_curve(E: EllCurveQ, *points) -> None:
    for P in points:
        if not E.contains(P):
            raise InvalidPoint(f"{P} is not on {E}")


def ell_neg(E: EllCurveQ, P: EllPoint) -> EllPoint:
    return P if P.is_identity else EllPoint(P.x, -P.y)


def ell_add(E: EllCurveQ, P: EllPoint, Q: EllPoint) -> EllPoint:
    """Exact group law."""
    _require_on_curve(E, P, Q)
    if P.is_identity:
        return Q
    if Q.is_identity:
        return P
    if P.x == Q.x:
        if P.y == -Q.y:
            return IDENTITY
        lam = (3 * P.x * P.x + E.A) / (2 * P.y)
    else:
        lam = (Q.y - P.y) / (Q.x - P.x)
    x3 = lam * lam - P.x - Q.x
    y3 = lam * (P.x - x3) - P.y
    return EllPoint(x3, y3)


def ell_mul(E: EllCurveQ, n: int, P: EllPoint) -> EllPoint:
    """n-th multiple by double-and-add."""
    _require_on_curve(E, P)
    if n < 0:
        return ell_mul(E, -n, ell_neg(E, P))
    R = IDENTITY
    Q = P
    while n:
        if n & 1:
            R = ell_add(E, R, Q)
        n >>= 1
        if n:
            Q = ell_add(E, Q, Q)
    return R


# ---------------------------------------------------------------------------
# torsion certificate (rational torsion has order <= 12)


@dataclass(frozen=True)
class TorsionCertificate:
    is_torsion: bool
    order: int | None
    multiples: tuple[EllPoint, ...]  # P, 2P, ..., 12P


def is_torsion(E: EllCurveQ, P: EllPoint) -> TorsionCertificate:
    """Decide torsion by scanning the first twelve multiples."""
    _require_on_curve(E, P)
    mults = []
    Q = IDENTITY
    order = None
    for n in range(1, 13):
        Q = ell_add(E, Q, P)
        mults.append(Q)
        if Q.is_identity and order is None:
            order = n
    return TorsionCertificate(order is not None, order, tuple(mults))


# ---------------------------------------------------------------------------
# reduction and congruence order


def good_reduction(E: EllCurveQ, p: int) -> bool:
    """True when the odd prime p does not divide the discriminant."""
    if p == 2:
        raise BadModulus("the prime 2 is excluded from congruence moduli")
    return E.discriminant % p != 0


def _vp_frac(x: Fraction, p: int) -> int:
    num = x.numerator
    den = x.denominator
    if num == 0:
        raise ValueError("valuation of zero")
    vn = kernels.vp(num, p) if num % p == 0 else 0
    vd = kernels.vp(den, p) if den % p == 0 else 0
    return vn - vd


def _near_identity(P: EllPoint, p: int, e: int) -> bool:
    # reduction to the identity mod p^e: v_p(x) <= -2e
    if P.is_identity:
        return True
    if P.x == 0:
        return False
    return _vp_frac(P.x, p) <= -2 * e


def order_mod(E: EllCurveQ, R: EllPoint, N: int, cap: int = 20000) -> int:
    """Least r >= 1 with r*R reducing to the identity modulo every prime
    power in N (odd good-reduction primes only), found by exact scan."""
    if N == 1:
        return 1
    if N < 1 or N % 2 == 0:
        raise BadModulus(f"modulus {N} must be an odd positive integer")
    factors = []
    M = N
    p = 3
    while p * p <= M:
        if M % p == 0:
            e = 0
            while M % p == 0:
                M //= p
                e += 1
            factors.append((p, e))
        p += 2
    if M > 1:
        factors.append((M, 1))
    for p, _ in factors:
        if not good_reduction(E, p):
            raise BadModulus(f"bad reduction at {p}")
    cert = is_torsion(E, R)
    if cert.is_torsion:
        raise TorsionGenerator("generator is torsion; congruence order undefined")
    Q = IDENTITY
    for r in range(1, cap + 1):
        Q = ell_add(E, Q, R)
        if all(_near_identity(Q, p, e) for p, e in factors):
            return r
    raise Exhausted(f"no congruence order below {cap}")


# ---------------------------------------------------------------------------
# embedding into the plane


def plane_embedding(P: EllPoint) -> ProjPoint:
    """(x : y : 1) cleared to primitive integers; identity goes to [0:1:0]."""
    if P.is_identity:
        return normalize_point((0, 1, 0))
    return normalize_point((P.x, P.y, 1))


# ---------------------------------------------------------------------------
# the genus-one search


@dataclass(frozen=True)
class EllFound:
    """A verified hit embed(P0 + m*(r*R)) with its verification record."""

    point: ProjPoint
    multiple: int
    levels: LevelVector
    report: WeilReport


def search_elliptic(
    E: EllCurveQ,
    D: Subscheme,
    P0: EllPoint,
    R: EllPoint,
    levels: LevelVector,
    want: int,
    scan_cap: int = 300,
    embed=plane_embedding,
    order_cap: int = 20000,
) -> list[EllFound]:
    """Verified points among embed(P0 + m*(r*R)), m = 1..scan_cap.

    r is the congruence order of R modulo the odd part of the level
    support, so candidates agree with P0 at those places; the prime 2 and
    the archimedean place are handled by per-candidate verification.
    Density of the multiples guarantees enough passes for a large enough
    cap; running out raises Exhausted with the partial list.
    """
    _require_on_curve(E, P0, R)
    cert = is_torsion(E, R)
    if cert.is_torsion:
        raise TorsionGenerator(f"generator has order {cert.order}")
    base_report = verify_point(D, embed(P0), levels, S=frozenset())
    if not base_report.verdict:
        raise BaseNotIntegral(f"seed point fails verification at {levels}")
    N = 1
    for p, e in levels.finite:
        if p != 2:
            N *= p ** e
    r = order_mod(E, R, N, cap=order_cap)
    step = ell_mul(E, r, R)
    hits: list[EllFound] = []
    seen = set()
    Q = P0
    for m in range(1, scan_cap + 1):
        Q = ell_add(E, Q, step)
        pt = embed(Q)
        if pt in seen:
            continue
        report = verify_point(D, pt, levels, S=frozenset())
        if report.verdict:
            seen.add(pt)
            hits.append(EllFound(pt, m, levels, report))
            if len(hits) >= want:
                return hits
    raise Exhausted(f"cap {scan_cap} reached with {len(hits)}/{want} points", hits)


# ---------------------------------------------------------------------------
# elliptic surfaces over Q(t)

_t = sympy.symbols("t")
_FIELD = sympy.QQ.frac_field(_t)


def _to_field(obj):
    """Coerce int/Fraction/str/sympy expressions into QQ(t)."""
    if isinstance(obj, Fraction):
        return _FIELD.from_sympy(sympy.Rational(obj.numerator, obj.denominator))
    if isinstance(obj, int):
        return _FIELD.from_sympy(sympy.Integer(obj))
    if isinstance(obj, str):
        return _FIELD.from_sympy(sympy.sympify(obj, locals={"t": _t}))
    return _FIELD.from_sympy(sympy.sympify(obj))


def _eval_field(el, t0: Fraction) -> Fraction:
    """Evaluate an element of QQ(t) at a rational t0 (SectionPole on poles)."""
    q0 = sympy.QQ(t0.numerator, t0.denominator)
    den = el.denom.evaluate(0, q0)
    if den == 0:
        raise SectionPole(f"denominator vanishes at t = {t0}")
    num = el.numer.evaluate(0, q0)
    v = num / den
    return Fraction(int(v.numerator), int(v.denominator))


def _is_poly(el) -> bool:
    return el.denom.degree(0) == 0 and not el.denom.is_zero


@dataclass(frozen=True, eq=False)
class EllSurface:
    """y^2 = x^3 + A(t) x + B(t) with a marked section (x(t), y(t)).

    A and B are integer-coefficient polynomials; the section satisfies the
    Weierstrass identity in QQ(t) and the generic discriminant is nonzero.
    """

    A: object
    B: object
    section_x: object
    section_y: object

    def __post_init__(self):
        for el in (self.A, self.B):
            if not _is_poly(el):
                raise InvalidPoint("A(t), B(t) must be polynomials")
        lhs = self.section_y ** 2
        rhs = self.section_x ** 3 + self.A * self.section_x + self.B
        if lhs != rhs:
            raise InvalidPoint("section does not satisfy the Weierstrass identity")
        if self.disc_poly == _FIELD.zero:
            raise InvalidPoint("generically singular family")

    @property
    def disc_poly(self):
        return _FIELD.from_sympy(sympy.Integer(-16)) * (
            _FIELD.from_sympy(sympy.Integer(4)) * self.A ** 3
            + _FIELD.from_sympy(sympy.Integer(27)) * self.B ** 2
        )


def make_surface(A, B, x, y) -> EllSurface:
    """Build a surface from polynomial/rational-function descriptions."""
    return EllSurface(_to_field(A), _to_field(B), _to_field(x), _to_field(y))


def specialize(Surf: EllSurface, t0) -> tuple[EllCurveQ, EllPoint]:
    """The fiber at t0 cleared to integer coefficients, with the section point.

    Scaling (x, y) -> (c^2 x, c^3 y) with minimal c makes A, B integral.
    """
    t0 = Fraction(t0)
    if _eval_field(Surf.disc_poly, t0) == 0:
        raise SingularFiber(f"discriminant vanishes at t = {t0}")
    A0 = _eval_field(Surf.A, t0)
    B0 = _eval_field(Surf.B, t0)
    x0 = _eval_field(Surf.section_x, t0)
    y0 = _eval_field(Surf.section_y, t0)
    c = 1
    rem_a, rem_b = A0.denominator, B0.denominator
    p = 2
    while rem_a > 1 or rem_b > 1:
        if rem_a % p == 0 or rem_b % p == 0:
            va = kernels.vp(rem_a, p) if rem_a % p == 0 else 0
            vb = kernels.vp(rem_b, p) if rem_b % p == 0 else 0
            k = max(-(-va // 4), -(-vb // 6))
            c *= p ** k
            rem_a //= p ** va
            rem_b //= p ** vb
        p += 1
    E = EllCurveQ(int(A0 * c ** 4), int(B0 * c ** 6))
    P = EllPoint(x0 * c ** 2, y0 * c ** 3)
    if not E.contains(P):
        raise InvalidPoint("specialized section left the curve (internal error)")
    return E, P


def section_multiple(Surf: EllSurface, n: int) -> EllSurface:
    """Replace the section by its n-th multiple in the generic group law."""
    if n < 1:
        raise InvalidPoint("multiplier must be positive")
    if n == 1:
        return Surf
    X, Y = Surf.section_x, Surf.section_y
    acc = None  # generic point accumulator, None = identity
    base = (X, Y)

    def gadd(P, Q):
        if P is None:
            return Q
        if Q is None:
            return P
        x1, y1 = P
        x2, y2 = Q
        if x1 == x2:
            if y1 == -y2:
                return None
            if y1 == _FIELD.zero:
                return None
            lam = (_FIELD.from_sympy(sympy.Integer(3)) * x1 ** 2 + Surf.A) / (
                _FIELD.from_sympy(sympy.Integer(2)) * y1
            )
        else:
            lam = (y2 - y1) / (x2 - x1)
        x3 = lam ** 2 - x1 - x2
        y3 = lam * (x1 - x3) - y1
        return (x3, y3)

    k = n
    Q = base
    while k:
        if k & 1:
            acc = gadd(acc, Q)
        k >>= 1
        if k:
            Q = gadd(Q, Q)
    if acc is None:
        raise DegenerateSection(f"section is {n}-torsion as a function")
    return EllSurface(Surf.A, Surf.B, acc[0], acc[1])


# ---------------------------------------------------------------------------
# fiberwise sweep


@dataclass(frozen=True)
class FiberResult:
    """Outcome for one fiber: either a hit list or a skip diagnostic."""

    t0: Fraction
    status: str  # ok | singular | pole | torsion | base | exhausted
    curve: EllCurveQ | None = None
    point: EllPoint | None = None
    certificate: TorsionCertificate | None = None
    levels: LevelVector | None = None
    hits: tuple[EllFound, ...] = ()
    detail: str = ""


def fiber_sweep(
    Surf: EllSurface,
    D: Subscheme,
    t_values,
    perfiber: int,
    levels_policy="minimal",
    multiplier: int = 1,
    scan_cap: int = 300,
) -> list[FiberResult]:
    """Run the genus-one search on every admissible fiber.

    D must be a point set in the fiber plane avoiding the zero section
    [0:1:0].  Per fiber: specialize, certify the section point non-torsion,
    derive levels (fixed LevelVector or per-fiber minimal), then search.
    Failures are per-fiber diagnostics; the sweep never aborts globally.
    """
    zero_section = normalize_point((0, 1, 0))
    if local_weil(D, zero_section, ARCH).infinite:
        raise InvalidPoint("avoided set meets the identity section")
    work = section_multiple(Surf, multiplier)
    results: list[FiberResult] = []
    for raw in t_values:
        t0 = Fraction(raw)
        try:
            E, P = specialize(work, t0)
        except SingularFiber as exc:
            results.append(FiberResult(t0, "singular", detail=str(exc)))
            continue
        except SectionPole as exc:
            results.append(FiberResult(t0, "pole", detail=str(exc)))
            continue
        cert = is_torsion(E, P)
        if cert.is_torsion:
            results.append(
                FiberResult(
                    t0, "torsion", curve=E, point=P, certificate=cert,
                    detail=f"TorsionSpecialization: order {cert.order}",
                )
            )
            continue
        embedded = plane_embedding(P)
        levels = None
        try:
            if levels_policy == "minimal":
                levels = minimal_levels(D, embedded)
            else:
                levels = levels_policy
            hits = search_elliptic(
                E, D, P, P, levels, perfiber, scan_cap=scan_cap
            )
        except Exhausted as exc:
            results.append(
                FiberResult(
                    t0, "exhausted", curve=E, point=P, certificate=cert,
                    levels=levels, hits=tuple(exc.partial), detail=str(exc),
                )
            )
            continue
        except (BaseNotIntegral, OnSubscheme, BadModulus) as exc:
            results.append(
                FiberResult(t0, "base", curve=E, point=P, certificate=cert, detail=str(exc))
            )
            continue
        results.append(
            FiberResult(
                t0, "ok", curve=E, point=P, certificate=cert,
                levels=levels, hits=tuple(hits),
            )
        )
    return results
