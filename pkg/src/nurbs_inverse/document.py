"""JSON curve documents and the bundled example curves."""
from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

from .bspline import CurveError, KnotVector, NurbsCurve
from .ratpoly import Backend, fmt_scalar, parse_scalar

FIXTURES = ("quadratic", "cubic", "quartic", "quintic")


def _scalar(value, where: str):
    try:
        return parse_scalar(value)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise CurveError(f"{where}: cannot parse {value!r} ({exc})") from None


def curve_from_dict(doc: dict, backend: Backend = Backend.EXACT) -> NurbsCurve:
    """Build a curve from a parsed document.

    Values may be ints, ``"p/q"`` strings or decimal strings; decimal JSON
    numbers are read through their text, so ``0.1`` means exactly ``1/10``.
    """
    if not isinstance(doc, dict):
        raise CurveError("document: expected a JSON object")
    for key in ("degree", "knots", "control_points", "weights"):
        if key not in doc:
            raise CurveError(f"{key}: missing field")
    degree = doc["degree"]
    if isinstance(degree, str) and degree.isdigit():
        degree = int(degree)
    if isinstance(degree, bool) or not isinstance(degree, int):
        raise CurveError(f"degree: expected an integer, got {degree!r}")
    knots = [_scalar(k, f"knots[{i}]") for i, k in enumerate(doc["knots"])]
    pts = []
    for i, p in enumerate(doc["control_points"]):
        if not isinstance(p, (list, tuple)) or len(p) != 2:
            raise CurveError(f"control_points[{i}]: expected [x, y]")
        pts.append((_scalar(p[0], f"control_points[{i}][0]"),
                    _scalar(p[1], f"control_points[{i}][1]")))
    weights = [_scalar(w, f"weights[{i}]") for i, w in enumerate(doc["weights"])]
    curve = NurbsCurve(degree, KnotVector(tuple(knots)), tuple(pts), tuple(weights),
                       str(doc.get("name", "")))
    return curve.to_backend(backend)


def curve_to_dict(curve: NurbsCurve) -> dict:
    c = curve.exact()
    doc = {}
    if c.name:
        doc["name"] = c.name
    doc["degree"] = c.degree
    doc["knots"] = [fmt_scalar(k) for k in c.knots]
    doc["control_points"] = [[fmt_scalar(x), fmt_scalar(y)] for x, y in c.control_points]
    doc["weights"] = [fmt_scalar(w) for w in c.weights]
    return doc


def loads(text: str, backend: Backend = Backend.EXACT) -> NurbsCurve:
    try:
        doc = json.loads(text, parse_float=str)
    except json.JSONDecodeError as exc:
        raise CurveError(f"document: invalid JSON ({exc})") from None
    return curve_from_dict(doc, backend)


def dumps(curve: NurbsCurve) -> str:
    return json.dumps(curve_to_dict(curve), indent=2)


def load_curve(path, backend: Backend = Backend.EXACT) -> NurbsCurve:
    return loads(Path(path).read_text(), backend)


def fixture_path(name: str):
    if name not in FIXTURES:
        raise KeyError(f"unknown fixture {name!r}; choose from {FIXTURES}")
    return resources.files("nurbs_inverse") / "fixtures" / f"{name}.json"


def load_fixture(name: str, backend: Backend = Backend.EXACT) -> NurbsCurve:
    """One of the bundled example curves: quadratic, cubic, quartic, quintic."""
    return loads(fixture_path(name).read_text(), backend)
