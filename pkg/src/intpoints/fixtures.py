"""Text fixture parsers: subschemes, point lists, curves, surfaces,
levels and place lists, and sectioned key-value job configs.

Formats are line-based with '#' comments.  A subscheme file mixes
point-ideal components and explicit generator components:

    nvars: 3
    codim: 2
    point: [0:0:1]
    component: x0 - x1, x2^2 - x0*x1

A curve file lists binary coordinate forms in s, t:

    form: 4*s + t
    form: -3*s + t
    form: 2*s

A surface file gives the Weierstrass family and its section:

    A: 2 - t^2
    B: t^2 + 1
    x: t
    y: t + 1
"""

from __future__ import annotations

import configparser
from fractions import Fraction

from .binforms import parse_binform
from .elliptic import EllSurface, make_surface
from .errors import ParseError
from .genus0 import CurveMap, curve_map
from .projgeom import (
    ARCH,
    Place,
    ProjPoint,
    Subscheme,
    finite,
    parse_form,
    parse_point,
    point_ideal,
)
from .weil import LevelVector


def _lines(text: str):
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            yield line


def _kv(line: str):
    if ":" not in line:
        raise ParseError(f"expected 'key: value', got {line!r}")
    key, val = line.split(":", 1)
    return key.strip().lower(), val.strip()


def parse_subscheme(text: str) -> Subscheme:
    """Parse a subscheme fixture (see module docstring for the format)."""
    nvars = None
    codim = None
    components = []
    point_components = 0
    for line in _lines(text):
        key, val = _kv(line)
        if key == "nvars":
            nvars = int(val)
        elif key == "codim":
            codim = int(val)
        elif key == "point":
            # value may itself contain ':' so reparse from the raw line
            P = parse_point(line.split(":", 1)[1].strip())
            if nvars is None:
                nvars = len(P.coords)
            elif nvars != len(P.coords):
                raise ParseError(f"point {P} has wrong dimension")
            components.append(point_ideal(P).components[0])
            point_components += 1
        elif key == "component":
            gens = [g.strip() for g in val.split(",") if g.strip()]
            if not gens:
                raise ParseError("component with no generators")
            if nvars is None:
                raise ParseError("nvars must precede generator components")
            components.append(tuple(parse_form(g, nvars) for g in gens))
        else:
            raise ParseError(f"unknown key {key!r} in subscheme fixture")
    if nvars is None:
        raise ParseError("empty subscheme fixture")
    if codim is None and point_components == len(components) and components:
        codim = nvars - 1
    return Subscheme(nvars, tuple(components), codim)


def parse_points(text: str) -> list[ProjPoint]:
    """One point per line."""
    out = [parse_point(line) for line in _lines(text)]
    if not out:
        raise ParseError("no points in fixture")
    return out


def parse_curve(text: str) -> CurveMap:
    """Binary coordinate forms, one per 'form:' line; optional degree check."""
    degree = None
    forms = []
    for line in _lines(text):
        key, val = _kv(line)
        if key == "degree":
            degree = int(val)
        elif key == "form":
            forms.append(parse_binform(val))
        else:
            raise ParseError(f"unknown key {key!r} in curve fixture")
    if not forms:
        raise ParseError("curve fixture without forms")
    if degree is not None and any(f.degree != degree for f in forms):
        raise ParseError("declared degree does not match the forms")
    return curve_map(forms)


def parse_surface(text: str) -> EllSurface:
    """Weierstrass family fixture with section numerators/denominators."""
    fields = {}
    for line in _lines(text):
        key, val = _kv(line)
        if key not in ("a", "b", "x", "y"):
            raise ParseError(f"unknown key {key!r} in surface fixture")
        fields[key] = val.replace("^", "**")
    missing = {"a", "b", "x", "y"} - set(fields)
    if missing:
        raise ParseError(f"surface fixture missing {sorted(missing)}")
    return make_surface(fields["a"], fields["b"], fields["x"], fields["y"])


def parse_quadric(text: str):
    """Quadric-surface fixture: a 'q:' form in x0..x3 and a 'marked:' point."""
    from .sweeps import QuadricSurfaceAmbient

    q = None
    marked = None
    for line in _lines(text):
        key, val = _kv(line)
        if key == "q":
            q = parse_form(val, 4)
        elif key == "marked":
            marked = parse_point(line.split(":", 1)[1].strip())
        else:
            raise ParseError(f"unknown key {key!r} in quadric fixture")
    if q is None or marked is None:
        raise ParseError("quadric fixture needs 'q:' and 'marked:'")
    return QuadricSurfaceAmbient(q, marked)


def parse_levels(spec: str) -> LevelVector:
    """Parse '2:1,3:2,arch:4/3'; 'trivial' or '' is the empty vector."""
    spec = spec.strip()
    if spec in ("", "trivial"):
        return LevelVector.of()
    fin = {}
    arch = None
    for part in spec.split(","):
        part = part.strip()
        if not part:
            continue
        if ":" not in part:
            raise ParseError(f"bad level entry {part!r}")
        key, val = part.split(":", 1)
        key = key.strip().lower()
        if key in ("arch", "inf", "oo"):
            arch = Fraction(val.strip())
        else:
            fin[int(key)] = int(val)
    return LevelVector.of(fin, arch)


def parse_places(spec: str) -> frozenset[Place]:
    """Parse 'arch,2,5' into a place set."""
    out = set()
    for part in spec.split(","):
        part = part.strip().lower()
        if not part:
            continue
        if part in ("arch", "inf", "oo"):
            out.add(ARCH)
        else:
            out.add(finite(int(part)))
    return frozenset(out)


def load_config(path: str) -> dict:
    """Key-value defaults from the [job] section of an INI config file."""
    parser = configparser.ConfigParser()
    read = parser.read(path)
    if not read:
        raise ParseError(f"config file {path!r} not found")
    if "job" not in parser:
        raise ParseError("config file needs a [job] section")
    return {k.replace("-", "_"): v for k, v in parser["job"].items()}
