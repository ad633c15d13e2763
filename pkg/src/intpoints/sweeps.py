"""Density pipelines: linear-section sweeps, the complete enumeration
against a coordinate hyperplane, and finite density certificates.

A sweep fixes the levels once from a seed point, enumerates genus-zero
section curves through the seed (lines in projective space, hyperplane
conics on a quadric surface, or user-supplied sections) by deterministic
slope height with rejection, runs the appropriate curve search on each,
and aggregates the verified hits with provenance.  Zariski density is
witnessed at a finite degree cutoff by an exact rank computation:
no nonzero form of degree <= d vanishes on the cloud.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations_with_replacement

from . import kernels
from .binforms import BinForm
from .errors import (
    BadPunctureCount,
    BaseNotIntegral,
    CodimTooSmall,
    DegreeTooLarge,
    Exhausted,
    IntersectsD,
    InvalidPoint,
    IrrationalPunctures,
    MissingArchLevel,
    SingularAtP,
    TooManyPunctures,
    UnitsFinite,
)
from .genus0 import (
    CurveMap,
    curve_map,
    curve_meets,
    map_point,
    reparametrize,
    search_genus0,
    search_s_integral,
)
from .projgeom import (
    HomForm,
    ProjPoint,
    Subscheme,
    canonical_points,
    evaluate_at_tuple,
    make_form,
    normalize_point,
    union,
)
from .weil import LevelVector, WeilReport, minimal_levels, support_places

# ---------------------------------------------------------------------------
# exact linear algebra (fraction-free)


def exact_rank(rows) -> int:
    """Rank of an integer matrix by Bareiss fraction-free elimination."""
    m = [list(r) for r in rows]
    if not m or not m[0]:
        return 0
    ncols = len(m[0])
    rank = 0
    prev = 1
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, len(m)):
            if m[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        for i in range(r + 1, len(m)):
            for j in range(c + 1, ncols):
                m[i][j] = (m[r][c] * m[i][j] - m[i][c] * m[r][j]) // prev
            m[i][c] = 0
        prev = m[r][c]
        rank += 1
        r += 1
        if r == len(m):
            break
    return rank


# ---------------------------------------------------------------------------
# quadratic-form helpers (exact polarization)


def _q_eval(q: HomForm, vec) -> int:
    return evaluate_at_tuple(q, vec)


def _q_polar(q: HomForm, u, v) -> int:
    """The bilinear value B(u, v) = q(u + v) - q(u) - q(v)."""
    w = tuple(a + b for a, b in zip(u, v))
    return _q_eval(q, w) - _q_eval(q, u) - _q_eval(q, v)


def _gram_rank(q: HomForm) -> int:
    n = q.nvars
    basis = [tuple(1 if i == k else 0 for i in range(n)) for k in range(n)]
    rows = [[_q_polar(q, basis[i], basis[j]) if i != j else 2 * _q_eval(q, basis[i]) for j in range(n)] for i in range(n)]
    return exact_rank(rows)


# ---------------------------------------------------------------------------
# conic parametrization


def conic_param(q: HomForm, P: ProjPoint) -> CurveMap:
    """Degree-2 parametrization of a smooth conic through its rational
    point P, by the pencil of lines through P; P sits at parameter (1:0).

    Requires q(P) = 0, a nonzero gradient at P, and a rank-3 Gram matrix
    (a degenerate conic would be parametrized onto the wrong component).
    """
    if q.nvars != 3 or q.degree != 2:
        raise InvalidPoint("conic must be a ternary quadratic form")
    x = P.coords
    if _q_eval(q, x) != 0:
        raise InvalidPoint(f"{P} is not on the conic")
    n = 3
    basis = [tuple(1 if i == k else 0 for i in range(n)) for k in range(n)]
    grad = [_q_polar(q, x, e) for e in basis]
    if all(g == 0 for g in grad):
        raise SingularAtP(f"gradient vanishes at {P}")
    if _gram_rank(q) != 3:
        raise SingularAtP("conic is degenerate (Gram rank < 3)")
    pivot = next(i for i, c in enumerate(x) if c)
    e1, e2 = (basis[i] for i in range(n) if i != pivot)
    # lines through P in direction v(s,t) = s e1 + t e2 re-meet the conic at
    #   X = q(v) P - B(P, v) v
    q1, q2 = _q_eval(q, e1), _q_eval(q, e2)
    q12 = _q_polar(q, e1, e2)
    b1, b2 = _q_polar(q, x, e1), _q_polar(q, x, e2)
    forms = []
    for i in range(n):
        # q(v) P_i = (q1 s^2 + q12 st + q2 t^2) P_i
        cs2 = q1 * x[i]
        cst = q12 * x[i]
        ct2 = q2 * x[i]
        # minus (b1 s + b2 t)(e1_i s + e2_i t)
        cs2 -= b1 * e1[i]
        cst -= b1 * e2[i] + b2 * e1[i]
        ct2 -= b2 * e2[i]
        forms.append(BinForm((cs2, cst, ct2)))
    phi = curve_map(forms)
    # move P (the root of B(P, v)) to parameter (1:0)
    s0, t0 = kernels.normalize_tuple((-b2, b1))
    if s0 != 0:
        phi = reparametrize(phi, s0, 0, t0, 1)
    else:
        phi = reparametrize(phi, s0, 1, t0, 0)
    if map_point(phi, (1, 0)) != P:
        raise SingularAtP(f"parametrization misses {P}")
    return phi


# ---------------------------------------------------------------------------
# ambients


@dataclass(frozen=True)
class ProjectiveSpaceAmbient:
    """P^n with the lines through the seed point as section curves."""

    n: int


@dataclass(frozen=True)
class QuadricSurfaceAmbient:
    """A rank-4 quadric in P^3 with a marked rational point; sections are
    the hyperplane conics through the marked point."""

    q: HomForm
    marked: ProjPoint

    def __post_init__(self):
        if self.q.nvars != 4 or self.q.degree != 2:
            raise InvalidPoint("quadric surface needs a quaternary quadratic")
        if _q_eval(self.q, self.marked.coords) != 0:
            raise InvalidPoint("marked point is not on the quadric")
        if _gram_rank(self.q) != 4:
            raise InvalidPoint("quadric must have rank 4")
        grad = [
            _q_polar(self.q, self.marked.coords, tuple(1 if i == k else 0 for i in range(4)))
            for k in range(4)
        ]
        if all(g == 0 for g in grad):
            raise InvalidPoint("quadric is singular at the marked point")


@dataclass(frozen=True)
class UserSectionsAmbient:
    """Caller-supplied sections: given the dual vector of a hyperplane
    through P and P itself, the callback returns a CurveMap with P at
    parameter (1:0), or None when that hyperplane has no usable rational
    section."""

    nvars: int
    callback: object


@dataclass(frozen=True)
class SectionCurve:
    curve: CurveMap
    base: tuple[int, int]  # parameter of the seed point, always (1, 0)
    label: str


def _perp_basis(vec):
    """Integer basis of the hyperplane orthogonal to a primitive vector."""
    n = len(vec)
    pivot = next(i for i, c in enumerate(vec) if c)
    out = []
    for j in range(n):
        if j == pivot:
            continue
        w = [0] * n
        w[j] = vec[pivot]
        w[pivot] = -vec[j]
        out.append(kernels.normalize_tuple(tuple(w)))
    return out


def _line_through(P: ProjPoint, Q0) -> CurveMap:
    forms = [BinForm((a, b)) for a, b in zip(P.coords, Q0)]
    return curve_map(forms)


def section_curves(X, P: ProjPoint, avoid: Subscheme, howmany: int, cap: int = 60):
    """Up to `howmany` genus-zero section curves through P missing the
    avoid-set, enumerated by slope height with rejection.

    Raises Exhausted when the enumeration cap is hit first.
    """
    out: list[SectionCurve] = []

    if isinstance(X, ProjectiveSpaceAmbient):
        if len(P.coords) != X.n + 1:
            raise InvalidPoint("seed point not in the ambient space")
        seen_lines = set()
        for Q0 in canonical_points(X.n, cap):
            if len(out) >= howmany:
                return out
            if Q0 == P:
                continue
            key = _span_key(P.coords, Q0.coords)
            if key in seen_lines:
                continue
            seen_lines.add(key)
            phi = _line_through(P, Q0.coords)
            if curve_meets(avoid, phi).kind != "empty":
                continue
            out.append(SectionCurve(phi, (1, 0), f"line through {Q0}"))
        if len(out) >= howmany:
            return out
        raise Exhausted(f"slope cap {cap}: only {len(out)}/{howmany} sections", out)

    if isinstance(X, QuadricSurfaceAmbient):
        q, M = X.q, X.marked
        duals = _perp_basis(M.coords)
        for coeffs in canonical_points(len(duals) - 1, cap):
            if len(out) >= howmany:
                return out
            ell = [0, 0, 0, 0]
            for c, w in zip(coeffs.coords, duals):
                for i in range(4):
                    ell[i] += c * w[i]
            ell = kernels.normalize_tuple(tuple(ell))
            phi = _quadric_section(q, M, ell)
            if phi is None:
                continue
            if curve_meets(avoid, phi).kind != "empty":
                continue
            out.append(SectionCurve(phi, (1, 0), f"plane {ell}"))
        if len(out) >= howmany:
            return out
        raise Exhausted(f"slope cap {cap}: only {len(out)}/{howmany} sections", out)

    if isinstance(X, UserSectionsAmbient):
        duals = _perp_basis(P.coords)
        for coeffs in canonical_points(len(duals) - 1, cap):
            if len(out) >= howmany:
                return out
            ell = [0] * X.nvars
            for c, w in zip(coeffs.coords, duals):
                for i in range(X.nvars):
                    ell[i] += c * w[i]
            ell = kernels.normalize_tuple(tuple(ell))
            phi = X.callback(ell, P)
            if phi is None:
                continue
            if map_point(phi, (1, 0)) != P:
                raise InvalidPoint("user section does not place the seed at (1:0)")
            if curve_meets(avoid, phi).kind != "empty":
                continue
            out.append(SectionCurve(phi, (1, 0), f"user section {ell}"))
        if len(out) >= howmany:
            return out
        raise Exhausted(f"slope cap {cap}: only {len(out)}/{howmany} sections", out)

    raise InvalidPoint(f"unknown ambient {X!r}")


def _span_key(u, v):
    """Canonical key of the projective line spanned by two points."""
    n = len(u)
    minors = tuple(u[i] * v[j] - u[j] * v[i] for i in range(n) for j in range(i + 1, n))
    return kernels.normalize_tuple(minors)


def _quadric_section(q: HomForm, M: ProjPoint, ell) -> CurveMap | None:
    """Conic cut by the plane ell through the marked point, parametrized;
    None when the plane is tangent (degenerate section)."""
    plane = _perp_basis(ell)
    pairs = [
        (u, v)
        for i, u in enumerate(plane)
        for v in plane[i + 1 :]
    ]
    UV = None
    for u, v in pairs:
        if exact_rank([list(M.coords), list(u), list(v)]) == 3:
            UV = (u, v)
            break
    if UV is None:
        return None
    U, V = UV
    x = M.coords
    qbar = {}
    qbar[(2, 0, 0)] = _q_eval(q, x)
    qbar[(0, 2, 0)] = _q_eval(q, U)
    qbar[(0, 0, 2)] = _q_eval(q, V)
    qbar[(1, 1, 0)] = _q_polar(q, x, U)
    qbar[(1, 0, 1)] = _q_polar(q, x, V)
    qbar[(0, 1, 1)] = _q_polar(q, U, V)
    qbar = {e: c for e, c in qbar.items() if c != 0}
    if not qbar:
        return None
    conic = make_form(3, qbar)
    marked3 = normalize_point((1, 0, 0))
    try:
        psi = conic_param(conic, marked3)
    except (SingularAtP, InvalidPoint):
        return None
    a, b, c = (f.coeffs for f in psi.forms)
    forms = []
    for i in range(4):
        forms.append(
            BinForm(
                tuple(a[k] * x[i] + b[k] * U[i] + c[k] * V[i] for k in range(3))
            )
        )
    return curve_map(forms)


# ---------------------------------------------------------------------------
# clouds


@dataclass(frozen=True)
class CloudPoint:
    point: ProjPoint
    curve_index: int
    param: tuple[int, int]
    levels: LevelVector
    report: WeilReport


@dataclass(frozen=True)
class CurveDiagnostic:
    curve_index: int
    code: str
    message: str


@dataclass(frozen=True)
class PointCloud:
    """Verified points with provenance, plus per-curve diagnostics."""

    entries: tuple[CloudPoint, ...]
    curves: tuple[SectionCurve, ...]
    levels: LevelVector
    diagnostics: tuple[CurveDiagnostic, ...] = ()

    def by_curve(self) -> dict[int, list[CloudPoint]]:
        out: dict[int, list[CloudPoint]] = {}
        for e in self.entries:
            out.setdefault(e.curve_index, []).append(e)
        return out

    @property
    def points(self) -> tuple[ProjPoint, ...]:
        return tuple(e.point for e in self.entries)


def _require_codim2(D: Subscheme) -> None:
    if D.components and (D.codim is None or D.codim < 2):
        raise CodimTooSmall("avoided set must have declared codimension >= 2")


def _require_off(D: Subscheme, P: ProjPoint) -> None:
    support_places(D, P)  # raises OnSubscheme when P lies on D


def _require_in_ambient(X, P: ProjPoint) -> None:
    if isinstance(X, QuadricSurfaceAmbient) and _q_eval(X.q, P.coords) != 0:
        raise InvalidPoint("seed point is not on the quadric")


def everywhere_sweep(
    X,
    D: Subscheme,
    P: ProjPoint,
    curves: int,
    per_curve: int,
    section_cap: int = 60,
    search_cap: int = 400,
) -> PointCloud:
    """A provenance-tagged cloud of points verifying at the seed's minimal
    levels, gathered from section curves through the seed.

    The levels are fixed once from the seed; per-curve failures become
    diagnostics, never a global abort.
    """
    _require_codim2(D)
    _require_off(D, P)
    _require_in_ambient(X, P)
    levels = minimal_levels(D, P)
    sections = section_curves(X, P, D, curves, cap=section_cap)
    entries: list[CloudPoint] = []
    diags: list[CurveDiagnostic] = []
    for idx, sec in enumerate(sections):
        try:
            hits = search_genus0(sec.curve, D, sec.base, levels, per_curve, cap=search_cap)
        except Exhausted as exc:
            hits = list(exc.partial)
            diags.append(CurveDiagnostic(idx, "Exhausted", str(exc)))
        except (IntersectsD, BaseNotIntegral) as exc:
            diags.append(CurveDiagnostic(idx, type(exc).__name__, str(exc)))
            continue
        for h in hits:
            entries.append(CloudPoint(h.point, idx, h.param, h.levels, h.report))
    return PointCloud(tuple(entries), tuple(sections), levels, tuple(diags))


def _divisor_degree(Dprime: Subscheme) -> int:
    total = 0
    for comp in Dprime.components:
        if len(comp) != 1:
            raise DegreeTooLarge("divisor part must be principal per component")
        total += comp[0].degree
    return total


def s_integral_sweep(
    X,
    Dprime: Subscheme,
    N: Subscheme,
    S,
    P: ProjPoint,
    curves: int,
    per_curve: int,
    section_cap: int = 60,
    search_cap: int = 400,
) -> PointCloud:
    """S-integral cloud against D' + N: sections avoid only the
    codimension-two part N, punctures against the divisor part D' are
    classified per curve, and candidates are verified at every place
    outside S.  Two-puncture curves without a finite place in S are
    skipped with a UnitsFinite diagnostic.
    """
    S = frozenset(S)
    if not any(v.is_arch for v in S):
        raise BadPunctureCount("S must contain the archimedean place")
    if _divisor_degree(Dprime) > 2:
        raise DegreeTooLarge("divisor part has degree > 2")
    if N.components:
        _require_codim2(N)
    L = union(Dprime, N) if N.components else Dprime
    _require_off(L, P)
    _require_in_ambient(X, P)
    levels = minimal_levels(L, P)
    sections = section_curves(X, P, N, curves, cap=section_cap)
    entries: list[CloudPoint] = []
    diags: list[CurveDiagnostic] = []
    for idx, sec in enumerate(sections):
        pd = curve_meets(Dprime, sec.curve)
        try:
            if pd.kind == "empty":
                hits = search_genus0(sec.curve, L, sec.base, levels, per_curve, cap=search_cap)
            elif pd.kind in ("one", "two"):
                hits = search_s_integral(
                    sec.curve, Dprime, N, S, sec.base, levels, per_curve, cap=search_cap
                )
            else:
                raise TooManyPunctures(f"{pd.count} punctures on the divisor part")
        except Exhausted as exc:
            hits = list(exc.partial)
            diags.append(CurveDiagnostic(idx, "Exhausted", str(exc)))
        except (
            TooManyPunctures,
            IrrationalPunctures,
            UnitsFinite,
            BaseNotIntegral,
            IntersectsD,
            BadPunctureCount,
        ) as exc:
            diags.append(CurveDiagnostic(idx, type(exc).__name__, str(exc)))
            continue
        for h in hits:
            entries.append(CloudPoint(h.point, idx, h.param, h.levels, h.report))
    return PointCloud(tuple(entries), tuple(sections), levels, tuple(diags))


# ---------------------------------------------------------------------------
# complete enumeration for the coordinate hyperplane


def enumerate_everywhere_integral(n: int, levels: LevelVector) -> tuple[ProjPoint, ...]:
    """All points of P^n integral against {x_0 = 0} at the given levels.

    These are the primitive tuples with v_p(x_0) bounded by the finite
    levels (so x_0 divides the level modulus) and max_j |x_j| bounded by
    t_arch * |x_0|.  Enumerated by divisor of the modulus, then by
    lexicographic box scan; provably complete, hence finite.
    """
    if levels.arch is None:
        raise MissingArchLevel("complete enumeration needs an archimedean level")
    t = levels.arch
    if t < 1:
        return ()
    divisors = [1]
    for p, e in levels.finite:
        divisors = [d * p ** k for d in divisors for k in range(e + 1)]
    divisors.sort()
    out: list[ProjPoint] = []
    for d in divisors:
        bound = int(t * d)  # floor; t*d >= d >= 1

        def scan(prefix):
            if len(prefix) == n:
                tup = (d, *prefix)
                if kernels.content(tup) == 1:
                    out.append(ProjPoint(tup))
                return
            for c in range(-bound, bound + 1):
                scan(prefix + [c])

        scan([])
    return tuple(out)


# ---------------------------------------------------------------------------
# density certificates


@dataclass(frozen=True)
class DensityVerdict:
    degree: int
    rank: int
    expected: int
    passed: bool


def density_certificate(points, n: int, d: int) -> tuple[DensityVerdict, ...]:
    """Exact-rank witnesses that no nonzero form of degree <= d vanishes
    on the whole point set: PASS at degree d' iff the evaluation matrix
    of all degree-d' monomials has full column rank C(n+d', n)."""
    pts = [p.coords if isinstance(p, ProjPoint) else tuple(p) for p in points]
    verdicts = []
    for deg in range(1, d + 1):
        monomials = sorted(
            (_exps(n, deg, combo) for combo in combinations_with_replacement(range(n + 1), deg)),
            reverse=True,
        )
        rows = [[_monomial(x, e) for e in monomials] for x in pts]
        rank = exact_rank(rows)
        verdicts.append(DensityVerdict(deg, rank, len(monomials), rank == len(monomials)))
    return tuple(verdicts)


def _exps(n, deg, combo):
    e = [0] * (n + 1)
    for i in combo:
        e[i] += 1
    return tuple(e)


def _monomial(x, e):
    v = 1
    for c, k in zip(x, e):
        if k:
            v *= c ** k
    return v
