"""Command-line entry point.

Subcommands: weil, verify, classify, search-genus0, search-elliptic,
sweep, sweep-s, surface-sweep, enumerate, certify, demo.  Results go to
--output (default stdout) as line-delimited JSON records; human-readable
summaries go to stderr.  Everything is deterministic: rerunning a
command produces byte-identical records.

Exit codes: 0 success, 1 demo assertion failure, 2 usage or precondition
errors.  Fixture-valued flags accept a file path or inline text with ';'
separating lines.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass
from fractions import Fraction

from . import fixtures, records
from .elliptic import (
    EllCurveQ,
    affine,
    fiber_sweep,
    is_torsion,
    plane_embedding,
    search_elliptic,
)
from .errors import Exhausted, IntPointsError, ParseError
from .genus0 import search_genus0, search_s_integral
from .projgeom import (
    ARCH,
    ProjPoint,
    Subscheme,
    canonical_points,
    empty_subscheme,
    finite,
    normalize_point,
    parse_point,
    point_ideal,
    points_subscheme,
)
from .sweeps import (
    ProjectiveSpaceAmbient,
    density_certificate,
    enumerate_everywhere_integral,
    everywhere_sweep,
    s_integral_sweep,
)
from .weil import (
    LevelVector,
    classify_set,
    local_weil,
    minimal_levels,
    support_places,
    verify_point,
)


class DemoFailure(Exception):
    """An internal demo assertion did not hold."""


# ---------------------------------------------------------------------------
# input plumbing


def _read_source(value: str) -> str:
    """A fixture flag names a file or carries inline ';'-separated text."""
    if os.path.exists(value):
        with open(value, encoding="utf-8") as fh:
            return fh.read()
    return value.replace(";", "\n")


def load_subscheme(value: str) -> Subscheme:
    return fixtures.parse_subscheme(_read_source(value))


def load_points(value: str):
    return fixtures.parse_points(_read_source(value))


def _parse_pair(text: str):
    parts = text.strip().strip("[]()").split(":")
    if len(parts) != 2:
        raise ParseError(f"parameter pair must be 's:t', got {text!r}")
    return (int(parts[0]), int(parts[1]))


def _parse_ell_point(text: str):
    text = text.strip()
    if text in ("O", "0", "id"):
        from .elliptic import IDENTITY

        return IDENTITY
    parts = text.strip("()").split(",")
    if len(parts) != 2:
        raise ParseError(f"curve point must be 'x,y', got {text!r}")
    return affine(Fraction(parts[0]), Fraction(parts[1]))


def _levels_for(spec: str, D: Subscheme, base: ProjPoint) -> LevelVector:
    if spec.strip() == "minimal":
        return minimal_levels(D, base)
    return fixtures.parse_levels(spec)


def _ambient(spec: str, dim_hint: int | None = None):
    spec = spec.strip()
    low = spec.lower()
    if low.startswith("p") and low[1:].isdigit():
        return ProjectiveSpaceAmbient(int(low[1:]))
    if low.startswith("quadric:"):
        return fixtures.parse_quadric(_read_source(spec.split(":", 1)[1]))
    raise ParseError(f"unknown ambient {spec!r} (use P<n> or quadric:FILE)")


@dataclass
class Output:
    stream: object
    path: str

    def emit(self, recs) -> int:
        return records.write_records(self.stream, recs)

    def note(self, msg: str) -> None:
        print(msg, file=sys.stderr)


def _open_output(path: str) -> Output:
    if path == "-":
        return Output(sys.stdout, "-")
    return Output(open(path, "w", encoding="utf-8"), path)


# ---------------------------------------------------------------------------
# job configuration


@dataclass
class JobConfig:
    """Validated search-job description shared by the search subcommands."""

    task: str
    output: str = "-"
    subscheme: str | None = None
    divisor: str | None = None
    codim2: str | None = None
    ambient: str = "P2"
    curve: str | None = None
    surface: str | None = None
    base: str | None = None
    generator: str | None = None
    a: int | None = None
    b: int | None = None
    levels: str = "minimal"
    s_places: str = ""
    want: int = 10
    curves: int = 5
    per_curve: int = 10
    per_fiber: int = 5
    t_values: str = ""
    multiplier: int = 1
    cap: int = 400
    section_cap: int = 60
    scan_cap: int = 300

    REQUIRED = {
        "genus0": ("curve", "subscheme", "base"),
        "elliptic": ("a", "b", "base", "generator", "subscheme"),
        "sweep": ("subscheme", "base"),
        "sweep-s": ("divisor", "base"),
        "surface": ("surface", "subscheme", "t_values"),
    }

    def validate(self) -> None:
        missing = [f for f in self.REQUIRED[self.task] if getattr(self, f) in (None, "")]
        if missing:
            raise ParseError(f"task {self.task!r} needs --{missing[0].replace('_', '-')}")


def run_search(job: JobConfig, out: Output) -> None:
    """Dispatch a search job to the owning pipeline and emit its records."""
    job.validate()
    if job.task == "genus0":
        phi = fixtures.parse_curve(_read_source(job.curve))
        D = load_subscheme(job.subscheme)
        base = _parse_pair(job.base)
        from .genus0 import map_point

        levels = _levels_for(job.levels, D, map_point(phi, base))
        try:
            hits = search_genus0(phi, D, base, levels, job.want, cap=job.cap)
        except Exhausted as exc:
            hits = list(exc.partial)
            out.note(f"exhausted: {exc}")
        out.emit(records.found_record(h) for h in hits)
        out.note(f"search-genus0: {len(hits)} verified points at levels {levels}")
    elif job.task == "elliptic":
        E = EllCurveQ(job.a, job.b)
        P0 = _parse_ell_point(job.base)
        R = _parse_ell_point(job.generator)
        D = load_subscheme(job.subscheme)
        levels = _levels_for(job.levels, D, plane_embedding(P0))
        try:
            hits = search_elliptic(E, D, P0, R, levels, job.want, scan_cap=job.scan_cap)
        except Exhausted as exc:
            hits = list(exc.partial)
            out.note(f"exhausted: {exc}")
        out.emit(records.ell_found_record(h) for h in hits)
        out.note(f"search-elliptic on {E}: {len(hits)} verified points")
    elif job.task == "sweep":
        X = _ambient(job.ambient)
        D = load_subscheme(job.subscheme)
        P = parse_point(job.base)
        cloud = everywhere_sweep(
            X, D, P, job.curves, job.per_curve,
            section_cap=job.section_cap, search_cap=job.cap,
        )
        out.emit(records.cloud_records(cloud))
        out.note(
            f"sweep: {len(cloud.entries)} points on {len(cloud.curves)} curves "
            f"at levels {cloud.levels}"
        )
    elif job.task == "sweep-s":
        X = _ambient(job.ambient)
        Dp = load_subscheme(job.divisor)
        N = load_subscheme(job.codim2) if job.codim2 else empty_subscheme(Dp.nvars)
        S = fixtures.parse_places(job.s_places) | {ARCH}
        P = parse_point(job.base)
        cloud = s_integral_sweep(
            X, Dp, N, S, P, job.curves, job.per_curve,
            section_cap=job.section_cap, search_cap=job.cap,
        )
        out.emit(records.cloud_records(cloud))
        out.note(
            f"sweep-s: {len(cloud.entries)} points, "
            f"{len(cloud.diagnostics)} curve diagnostics"
        )
    elif job.task == "surface":
        Surf = fixtures.parse_surface(_read_source(job.surface))
        D = load_subscheme(job.subscheme)
        t_values = _parse_t_values(job.t_values)
        policy = "minimal" if job.levels.strip() == "minimal" else fixtures.parse_levels(job.levels)
        results = fiber_sweep(
            Surf, D, t_values, job.per_fiber,
            levels_policy=policy, multiplier=job.multiplier, scan_cap=job.scan_cap,
        )
        recs = []
        for r in results:
            recs.append(records.fiber_record(r))
            recs.extend(records.ell_found_record(h) for h in r.hits)
        out.emit(recs)
        ok = sum(1 for r in results if r.status == "ok")
        out.note(f"surface-sweep: {ok}/{len(results)} admissible fibers")
    else:
        raise ParseError(f"unknown task {job.task!r}")


def _parse_t_values(spec: str):
    spec = spec.strip()
    if ".." in spec:
        lo, hi = spec.split("..", 1)
        return [Fraction(k) for k in range(int(lo), int(hi) + 1)]
    return [Fraction(part.strip()) for part in spec.split(",") if part.strip()]


# ---------------------------------------------------------------------------
# plain commands


def cmd_weil(args, out: Output) -> None:
    D = load_subscheme(args.subscheme)
    P = parse_point(args.point)
    recs = []
    if args.places:
        places = sorted(
            fixtures.parse_places(args.places),
            key=lambda v: (v.is_arch, v.p or 0),
        )
    else:
        places = list(support_places(D, P)) + [ARCH]
    for v in places:
        recs.append(records.weil_record(P, v, local_weil(D, P, v)))
    try:
        lv = minimal_levels(D, P)
        recs.append(records.levels_record(P, lv))
        out.note(f"minimal levels of {P}: {lv}")
    except IntPointsError:
        out.note(f"{P} lies on the subscheme")
    out.emit(recs)


def cmd_verify(args, out: Output) -> None:
    D = load_subscheme(args.subscheme)
    pts = load_points(args.points)
    levels = fixtures.parse_levels(args.levels)
    S = fixtures.parse_places(args.s_places) if args.s_places else frozenset()
    recs = []
    passes = 0
    for P in pts:
        rep = verify_point(D, P, levels, S)
        passes += rep.verdict
        recs.append(records.report_record(rep))
    out.emit(recs)
    out.note(f"verify: {passes}/{len(pts)} points pass at {levels}")


def cmd_classify(args, out: Output) -> None:
    D = load_subscheme(args.subscheme)
    pts = load_points(args.points)
    S = fixtures.parse_places(args.s_places) if args.s_places else frozenset()
    cls = classify_set(pts, D, S)
    recs = [records.classification_record(cls)]
    recs.extend(records.per_point_record(P, lv) for P, lv in cls.per_point)
    out.emit(recs)
    out.note(
        f"classify: classical(everywhere)={cls.classical_everywhere} "
        f"classical(outside S)={cls.classical_outside_s} "
        f"support union={list(cls.support_union)}"
    )


def cmd_enumerate(args, out: Output) -> None:
    levels = fixtures.parse_levels(args.levels)
    pts = enumerate_everywhere_integral(args.dim, levels)
    out.emit([records.enumerate_record(pts)])
    out.note(f"enumerate: {len(pts)} points in P^{args.dim} at {levels}")


def cmd_certify(args, out: Output) -> None:
    pts = load_points(args.points)
    verdicts = density_certificate(pts, args.dim, args.degree)
    out.emit(records.density_record(v) for v in verdicts)
    worst = next((v for v in verdicts if not v.passed), None)
    out.note(
        "certify: PASS through degree %d" % args.degree
        if worst is None
        else f"certify: FAIL at degree {worst.degree} (rank {worst.rank}/{worst.expected})"
    )


# ---------------------------------------------------------------------------
# demos


def _demo_assert(cond: bool, msg: str) -> None:
    if not cond:
        raise DemoFailure(msg)


def demo_n_over_1(out: Output) -> None:
    """The integer points [n:1] of the line against the point at infinity:
    classically integral outside infinity, archimedean witness unbounded."""
    D = point_ideal(normalize_point((1, 0)))
    pts = [normalize_point((n, 1)) for n in range(1, 101)]
    for P in pts:
        _demo_assert(not support_places(D, P), f"finite support at {P}")
        _demo_assert(
            local_weil(D, P, ARCH).value == max(abs(P.coords[0]), 1),
            f"archimedean value at {P}",
        )
    half = classify_set(pts[:50], D)
    full = classify_set(pts, D)
    _demo_assert(full.classical_everywhere, "classical everywhere-integrality")
    _demo_assert(
        full.everywhere_witness.arch > half.everywhere_witness.arch,
        "archimedean witness must grow with the sample",
    )
    out.emit([records.classification_record(full)])
    out.note(
        f"n-over-1: classical integral family; arch witness grows "
        f"{half.everywhere_witness.arch} -> {full.everywhere_witness.arch}"
    )


def demo_seven_points(out: Output) -> None:
    """No classically integral points against the seven residue classes
    mod 2, yet a certified dense everywhere-integral cloud exists."""
    seven = points_subscheme(
        [normalize_point(c) for c in [
            (0, 0, 1), (0, 1, 0), (0, 1, 1), (1, 0, 0), (1, 0, 1), (1, 1, 0), (1, 1, 1),
        ]]
    )
    sample = []
    for P in canonical_points(2, 8):
        sample.append(P)
        if len(sample) == 1000:
            break
    two = finite(2)
    for P in sample:
        w = local_weil(seven, P, two)
        _demo_assert(w.value is None or w.value >= 2, f"value at 2 below 2 for {P}")
    base = normalize_point((4, -3, 2))
    cloud = everywhere_sweep(ProjectiveSpaceAmbient(2), seven, base, 5, 20)
    groups = cloud.by_curve()
    _demo_assert(len(groups) >= 5, "need five section curves")
    _demo_assert(all(len(g) >= 20 for g in groups.values()), "need 20 points per curve")
    verdicts = density_certificate(cloud.points, 2, 3)
    _demo_assert(all(v.passed for v in verdicts), "density certificate failed")
    family = [normalize_point((2 * k + 1, 2, 2)) for k in range(1, 100, 2)]
    cls = classify_set(family, seven)
    recs = list(records.cloud_records(cloud))
    recs.extend(records.density_record(v) for v in verdicts)
    recs.append(records.classification_record(cls))
    out.emit(recs)
    out.note(
        f"seven-points: 1000-point mod-2 check passed; cloud of "
        f"{len(cloud.entries)} points certified dense to degree 3; "
        f"odd-family support union {list(cls.support_union)}"
    )


def demo_finiteness(out: Output) -> None:
    """Complete enumeration against a coordinate hyperplane, cross-checked
    by brute force through the verifier."""
    from .projgeom import parse_form

    counts = {}
    for levels, expected in (
        (LevelVector.of({}, 2), 5),
        (LevelVector.of({2: 1}, 2), 9),
    ):
        pts = enumerate_everywhere_integral(1, levels)
        counts[str(levels)] = len(pts)
        _demo_assert(len(pts) == expected, f"expected {expected} points at {levels}")
        D = Subscheme(2, ((parse_form("x0", 2),),), codim=1)
        bound = int(levels.arch * 2 ** levels.exponent(2))
        brute = {
            P
            for P in canonical_points(1, bound)
            if verify_point(D, P, levels).verdict
        }
        _demo_assert(brute == set(pts), f"brute-force mismatch at {levels}")
    out.emit(
        [
            {"kind": "finiteness", "levels": lv, "count": c}
            for lv, c in sorted(counts.items())
        ]
    )
    out.note(f"finiteness: counts {counts} match brute force")


def demo_puncture(out: Output) -> None:
    """Dense everywhere-integral cloud against three plane points."""
    D = points_subscheme(
        [normalize_point(c) for c in [(1, 1, 4), (2, 3, 5), (1, 5, 25)]]
    )
    base = normalize_point((1, 1, 1))
    cloud = everywhere_sweep(ProjectiveSpaceAmbient(2), D, base, 5, 10)
    groups = cloud.by_curve()
    _demo_assert(len(groups) >= 5 and all(len(g) >= 10 for g in groups.values()),
                 "puncture sweep too sparse")
    verdicts = density_certificate(cloud.points, 2, 2)
    _demo_assert(all(v.passed for v in verdicts), "density certificate failed")
    recs = list(records.cloud_records(cloud))
    recs.extend(records.density_record(v) for v in verdicts)
    out.emit(recs)
    out.note(f"puncture: {len(cloud.entries)} verified points at levels {cloud.levels}")


def demo_surface(out: Output) -> None:
    """Fiberwise elliptic sweep on the fixture family."""
    Surf = fixtures.parse_surface(
        "A: 2 - t^2\nB: t^2 + 1\nx: t\ny: t + 1\n"
    )
    D = points_subscheme([normalize_point((1, 0, 0)), normalize_point((5, 1, 1))])
    results = fiber_sweep(Surf, D, range(1, 9), 3, scan_cap=200)
    ok = [r for r in results if r.status == "ok"]
    _demo_assert(len(ok) >= 5, "need five admissible fibers")
    _demo_assert(all(len(r.hits) >= 3 for r in ok), "need three points per fiber")
    torsion_skips = [r for r in results if r.status == "torsion"]
    _demo_assert(any(r.t0 == 1 for r in torsion_skips), "t=1 must be a torsion skip")
    recs = []
    for r in results:
        recs.append(records.fiber_record(r))
        recs.extend(records.ell_found_record(h) for h in r.hits)
    out.emit(recs)
    out.note(f"surface: {len(ok)} admissible fibers, torsion skip at t=1")


DEMOS = {
    "n-over-1": demo_n_over_1,
    "seven-points": demo_seven_points,
    "finiteness": demo_finiteness,
    "puncture": demo_puncture,
    "surface": demo_surface,
}


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="intpoints",
        description="exact integrality verification and certified point searches",
    )
    sub = top.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--output", default="-", help="records file ('-' = stdout)")
        p.add_argument("--config", help="INI file whose [job] section supplies defaults")

    p = sub.add_parser("weil", help="local values, support and minimal levels of a point")
    p.add_argument("--subscheme")
    p.add_argument("--point")
    p.add_argument("--places", default="")
    common(p)

    p = sub.add_parser("verify", help="check points against a level vector")
    p.add_argument("--subscheme")
    p.add_argument("--points")
    p.add_argument("--levels")
    p.add_argument("--s-places", default="")
    common(p)

    p = sub.add_parser("classify", help="the four integrality notions on a point set")
    p.add_argument("--subscheme")
    p.add_argument("--points")
    p.add_argument("--s-places", default="")
    common(p)

    p = sub.add_parser("search-genus0", help="congruence search on a parametrized curve")
    p.add_argument("--curve")
    p.add_argument("--subscheme")
    p.add_argument("--base", help="seed parameter 's:t'")
    p.add_argument("--levels", default="minimal")
    p.add_argument("--want", type=int, default=10)
    p.add_argument("--cap", type=int, default=400)
    common(p)

    p = sub.add_parser("search-elliptic", help="multiples search on a Weierstrass curve")
    p.add_argument("--a", type=int)
    p.add_argument("--b", type=int)
    p.add_argument("--base", help="seed point 'x,y'")
    p.add_argument("--generator", help="non-torsion point 'x,y'")
    p.add_argument("--subscheme")
    p.add_argument("--levels", default="minimal")
    p.add_argument("--want", type=int, default=10)
    p.add_argument("--scan-cap", type=int, default=300)
    common(p)

    p = sub.add_parser("sweep", help="everywhere-integral section sweep")
    p.add_argument("--ambient", default="P2")
    p.add_argument("--subscheme")
    p.add_argument("--base")
    p.add_argument("--curves", type=int, default=5)
    p.add_argument("--per-curve", type=int, default=10)
    p.add_argument("--section-cap", type=int, default=60)
    p.add_argument("--cap", type=int, default=400)
    common(p)

    p = sub.add_parser("sweep-s", help="S-integral section sweep")
    p.add_argument("--ambient", default="P2")
    p.add_argument("--divisor", help="divisor part, degree <= 2")
    p.add_argument("--codim2", default="", help="codimension >= 2 part (optional)")
    p.add_argument("--s-places", default="", help="finite places of S (arch is implied)")
    p.add_argument("--base")
    p.add_argument("--curves", type=int, default=5)
    p.add_argument("--per-curve", type=int, default=10)
    p.add_argument("--section-cap", type=int, default=60)
    p.add_argument("--cap", type=int, default=400)
    common(p)

    p = sub.add_parser("surface-sweep", help="fiberwise elliptic sweep")
    p.add_argument("--surface")
    p.add_argument("--subscheme")
    p.add_argument("--t-values", help="'1..15' or '1,2,7/2'")
    p.add_argument("--per-fiber", type=int, default=5)
    p.add_argument("--levels", default="minimal")
    p.add_argument("--multiplier", type=int, default=1)
    p.add_argument("--scan-cap", type=int, default=300)
    common(p)

    p = sub.add_parser("enumerate", help="all integral points against x0 = 0")
    p.add_argument("--dim", type=int)
    p.add_argument("--levels")
    common(p)

    p = sub.add_parser("certify", help="finite density certificate for a point file")
    p.add_argument("--points")
    p.add_argument("--dim", type=int)
    p.add_argument("--degree", type=int, default=3)
    common(p)

    p = sub.add_parser("demo", help="named end-to-end scenarios")
    p.add_argument("name", choices=sorted(DEMOS) + ["list"])
    common(p)

    return top


def _require(args, *names) -> None:
    for name in names:
        if getattr(args, name, None) in (None, ""):
            raise ParseError(f"missing --{name.replace('_', '-')}")


def _apply_config(args, argv) -> None:
    """Config values fill options the command line left at their defaults."""
    if not getattr(args, "config", None):
        return
    defaults = fixtures.load_config(args.config)
    given = {a.split("=", 1)[0].lstrip("-").replace("-", "_") for a in argv if a.startswith("--")}
    for key, val in defaults.items():
        if not hasattr(args, key):
            raise ParseError(f"config key {key!r} is not an option of this command")
        if key in given:
            continue
        cur = getattr(args, key)
        if isinstance(cur, int) and not isinstance(cur, bool):
            val = int(val)
        setattr(args, key, val)


SEARCH_TASKS = {
    "search-genus0": "genus0",
    "search-elliptic": "elliptic",
    "sweep": "sweep",
    "sweep-s": "sweep-s",
    "surface-sweep": "surface",
}


REQUIRED_FLAGS = {
    "weil": ("subscheme", "point"),
    "verify": ("subscheme", "points", "levels"),
    "classify": ("subscheme", "points"),
    "enumerate": ("dim", "levels"),
    "certify": ("points", "dim"),
}


def main(argv=None) -> int:
    argv = list(sys.argv[1:]) if argv is None else list(argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _apply_config(args, argv)
        if args.command in REQUIRED_FLAGS:
            _require(args, *REQUIRED_FLAGS[args.command])
        out = _open_output(args.output)
        try:
            if args.command == "weil":
                cmd_weil(args, out)
            elif args.command == "verify":
                cmd_verify(args, out)
            elif args.command == "classify":
                cmd_classify(args, out)
            elif args.command == "enumerate":
                cmd_enumerate(args, out)
            elif args.command == "certify":
                cmd_certify(args, out)
            elif args.command == "demo":
                if args.name == "list":
                    out.note("demos: " + ", ".join(sorted(DEMOS)))
                else:
                    DEMOS[args.name](out)
            elif args.command in SEARCH_TASKS:
                ns = vars(args)
                fields = {
                    f: ns[f]
                    for f in JobConfig.__dataclass_fields__
                    if f in ns and ns[f] is not None
                }
                job = JobConfig(task=SEARCH_TASKS[args.command], **fields)
                run_search(job, out)
            else:  # pragma: no cover
                parser.error(f"unknown command {args.command}")
        finally:
            if out.path != "-":
                out.stream.close()
    except DemoFailure as exc:
        print(f"demo assertion failed: {exc}", file=sys.stderr)
        return 1
    except IntPointsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
