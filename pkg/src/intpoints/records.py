"""Line-delimited structured records.

Every pipeline result serializes to one JSON object per line with a
"kind" field; values are exact strings (rationals as "a/b", finite-place
values as "p^m", infinite values as "inf").  Output is deterministic:
keys sorted, no floats, no timestamps.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .elliptic import EllFound, FiberResult
from .genus0 import FoundPoint
from .projgeom import ProjPoint
from .sweeps import CloudPoint, DensityVerdict, PointCloud
from .weil import SetClassification, WeilReport


def frac_str(x: Fraction | None) -> str:
    if x is None:
        return "inf"
    return str(x)


def point_str(P: ProjPoint) -> str:
    return str(P)


def report_record(report: WeilReport) -> dict:
    return {
        "kind": "verify",
        "point": str(report.point),
        "levels": str(report.levels),
        "values": {str(w.place): str(w) for w in report.values},
        "verdict": "pass" if report.verdict else "fail",
        "offending": [str(v) for v in report.offending],
    }


def weil_record(point, place, value) -> dict:
    return {
        "kind": "weil",
        "point": str(point),
        "place": str(place),
        "value": str(value),
    }


def levels_record(point, levels) -> dict:
    return {
        "kind": "levels",
        "point": str(point),
        "levels": str(levels),
    }


def classification_record(cls: SetClassification) -> dict:
    return {
        "kind": "classification",
        "points": cls.n_points,
        "classical_everywhere": cls.classical_everywhere,
        "classical_outside_s": cls.classical_outside_s,
        "everywhere_witness": str(cls.everywhere_witness),
        "s_witness": str(cls.s_witness),
        "support_union": list(cls.support_union),
    }


def per_point_record(point, levels) -> dict:
    return {
        "kind": "point-levels",
        "point": str(point),
        "levels": str(levels),
    }


def found_record(hit: FoundPoint) -> dict:
    return {
        "kind": "search-hit",
        "point": str(hit.point),
        "param": f"({hit.param[0]}:{hit.param[1]})",
        "levels": str(hit.levels),
        "verdict": "pass" if hit.report.verdict else "fail",
    }


def ell_found_record(hit: EllFound) -> dict:
    return {
        "kind": "search-hit",
        "point": str(hit.point),
        "multiple": hit.multiple,
        "levels": str(hit.levels),
        "verdict": "pass" if hit.report.verdict else "fail",
    }


def cloud_records(cloud: PointCloud):
    for i, sec in enumerate(cloud.curves):
        yield {
            "kind": "curve",
            "index": i,
            "label": sec.label,
            "forms": [str(f) for f in sec.curve.forms],
        }
    for e in cloud.entries:
        yield cloud_point_record(e)
    for d in cloud.diagnostics:
        yield {
            "kind": "diagnostic",
            "curve": d.curve_index,
            "code": d.code,
            "message": d.message,
        }


def cloud_point_record(e: CloudPoint) -> dict:
    return {
        "kind": "cloud-point",
        "point": str(e.point),
        "curve": e.curve_index,
        "param": f"({e.param[0]}:{e.param[1]})",
        "levels": str(e.levels),
        "verdict": "pass" if e.report.verdict else "fail",
    }


def fiber_record(r: FiberResult) -> dict:
    rec = {
        "kind": "fiber",
        "t": frac_str(r.t0),
        "status": r.status,
        "points": len(r.hits),
    }
    if r.curve is not None:
        rec["curve"] = str(r.curve)
    if r.point is not None:
        rec["section_point"] = str(r.point)
    if r.certificate is not None:
        rec["torsion"] = r.certificate.is_torsion
        if r.certificate.order:
            rec["torsion_order"] = r.certificate.order
    if r.levels is not None:
        rec["levels"] = str(r.levels)
    if r.detail:
        rec["detail"] = r.detail
    return rec


def density_record(v: DensityVerdict) -> dict:
    return {
        "kind": "density",
        "degree": v.degree,
        "rank": v.rank,
        "expected": v.expected,
        "verdict": "PASS" if v.passed else "FAIL",
    }


def enumerate_record(points) -> dict:
    return {
        "kind": "enumeration",
        "count": len(points),
        "points": [str(p) for p in points],
    }


def write_records(stream, records) -> int:
    n = 0
    for rec in records:
        stream.write(json.dumps(rec, sort_keys=True) + "\n")
        n += 1
    return n
