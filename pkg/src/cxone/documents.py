"""JSON documents for p-divisors, divisorial fans, valuations and witnesses."""
from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from typing import Any, Iterable, Mapping

from jsonschema import Draft202012Validator

from .lattice import LatticeError, format_rational, parse_rational
from .pdivisor import SPINE, Curve, DivisorError, DivisorialFan, HypPoint, PolyDivisor
from .polyhedra import Cone, Fan, PolyhedralError, Polyhedron

EXAMPLES = (
    "orthant_d2",
    "orthant_d3",
    "torsion_surface",
    "half_point_d2",
    "half_point_d3",
    "brieskorn_345",
    "johnson_kollar",
)

# Spellings accepted for the same curve point on the command line.
LABEL_ALIASES = {"∞": "inf", "inf": "∞"}


@dataclass(frozen=True)
class Violation:
    path: str
    message: str

    def __str__(self) -> str:
        return f"{self.path or '/'}: {self.message}"


class DocumentError(ValueError):
    """A document failed validation; ``violations`` lists what and where."""

    def __init__(self, violations: Iterable[Violation]):
        self.violations = list(violations)
        super().__init__("; ".join(str(v) for v in self.violations))


# --- schema ---------------------------------------------------------------


@lru_cache(maxsize=1)
def schema() -> dict:
    text = resources.files("cxone").joinpath("data/schemas/cxone.schema.json").read_text("utf-8")
    return json.loads(text)


def _validator(definition: str) -> Draft202012Validator:
    root = schema()
    return Draft202012Validator({"$ref": f"#/$defs/{definition}", "$defs": root["$defs"]})


def _pointer(path: Iterable[Any]) -> str:
    return "".join(f"/{p}" for p in path)


def schema_violations(doc: Any, definition: str) -> list[Violation]:
    errors = sorted(_validator(definition).iter_errors(doc), key=lambda e: list(map(str, e.path)))
    return [Violation(_pointer(e.absolute_path), e.message) for e in errors]


def _check(doc: Any, definition: str) -> None:
    found = schema_violations(doc, definition)
    if found:
        raise DocumentError(found)


# --- parsing --------------------------------------------------------------


class _Reader:
    """Collects semantic violations while building objects from a valid document."""

    def __init__(self, rank: int):
        self.rank = rank
        self.violations: list[Violation] = []

    def fail(self, path: str, message: str) -> None:
        self.violations.append(Violation(path, message))

    def vectors(self, rows: list, path: str) -> list[tuple] | None:
        ok = True
        for i, row in enumerate(rows):
            if len(row) != self.rank:
                self.fail(f"{path}/{i}", f"expected {self.rank} coordinates, got {len(row)}")
                ok = False
        return [tuple(row) for row in rows] if ok else None

    def cone(self, doc: dict, path: str) -> Cone | None:
        rays = self.vectors(doc["rays"], f"{path}/rays")
        if rays is None:
            return None
        c = Cone(rays, self.rank)
        if not c.is_pointed:
            self.fail(path, "cone is not strictly convex")
            return None
        return c

    def polyhedron(self, doc: dict | None, tail: Cone, path: str) -> Polyhedron | None:
        if doc is None:
            return Polyhedron.empty_set(self.rank, tail)
        verts = self.vectors(doc["vertices"], f"{path}/vertices")
        if verts is None:
            return None
        try:
            pts = [tuple(parse_rational(x) for x in v) for v in verts]
        except (LatticeError, ZeroDivisionError) as exc:
            self.fail(f"{path}/vertices", str(exc))
            return None
        if "rays" in doc:
            own = self.vectors(doc["rays"], f"{path}/rays")
            if own is None:
                return None
            if Cone(own, self.rank) != tail:
                self.fail(f"{path}/rays", "coefficient tail differs from the declared tail")
                return None
        return Polyhedron(pts, tail, self.rank)

    def member(self, doc: dict, curve: Curve, path: str) -> PolyDivisor | None:
        tail = self.cone(doc["tail"], f"{path}/tail")
        if tail is None:
            return None
        coeffs: dict[str, Polyhedron] = {}
        for y, p in doc["coefficients"].items():
            where = f"{path}/coefficients/{y}"
            if y not in curve.points:
                self.fail(where, f"unknown point label {y!r}")
                continue
            poly = self.polyhedron(p, tail, where)
            if poly is not None:
                coeffs[y] = poly
        if len(coeffs) != len(doc["coefficients"]):
            return None
        try:
            return PolyDivisor(tail, curve, coeffs, doc.get("locus", "complete"))
        except (DivisorError, PolyhedralError) as exc:
            self.fail(path, str(exc))
            return None


def _curve(doc: dict, reader: _Reader) -> Curve | None:
    try:
        return Curve(doc["genus"], tuple(doc["points"]))
    except DivisorError as exc:
        reader.fail("/curve", str(exc))
        return None


def divisor_from_json(doc: Any) -> PolyDivisor | DivisorialFan:
    """Validate a decoded document and build the object it describes."""
    fan = isinstance(doc, dict) and "divisors" in doc
    _check(doc, "fanDocument" if fan else "divisorDocument")
    reader = _Reader(doc["rank"])
    curve = _curve(doc["curve"], reader)
    if curve is None:
        raise DocumentError(reader.violations)
    if not fan:
        d = reader.member(doc, curve, "")
        if d is None:
            raise DocumentError(reader.violations)
        return d
    members = [reader.member(m, curve, f"/divisors/{i}") for i, m in enumerate(doc["divisors"])]
    if reader.violations:
        raise DocumentError(reader.violations)
    try:
        return DivisorialFan(members)
    except DivisorError as exc:
        raise DocumentError([Violation("/divisors", str(exc))]) from exc


def parse_input(text: str | bytes) -> PolyDivisor | DivisorialFan:
    """Parse a UTF-8 JSON input document."""
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError([Violation("", f"invalid JSON: {exc}")]) from exc
    return divisor_from_json(doc)


def load_example(name: str) -> PolyDivisor | DivisorialFan:
    return parse_input(example_text(name))


def example_text(name: str) -> str:
    if name not in EXAMPLES:
        raise KeyError(f"unknown example {name!r}; choose from {', '.join(EXAMPLES)}")
    return resources.files("cxone").joinpath(f"data/examples/{name}.json").read_text("utf-8")


# --- valuations -----------------------------------------------------------


def resolve_label(label: str, curve: Curve) -> str:
    if label in curve.points:
        return label
    alias = LABEL_ALIASES.get(label)
    if alias in curve.points:
        return alias
    raise DocumentError([Violation("/page", f"unknown point label {label!r}")])


def valuation_from_json(doc: Any, curve: Curve, rank: int) -> HypPoint:
    _check(doc, "valuation")
    if len(doc["a"]) != rank:
        raise DocumentError([Violation("/a", f"expected {rank} coordinates, got {len(doc['a'])}")])
    page, b = doc["page"], doc["b"]
    if (page is None) != (b == 0):
        raise DocumentError([Violation("/b", "height is zero exactly on the spine")])
    if page is None:
        return HypPoint.spine(doc["a"])
    return HypPoint(resolve_label(page, curve), tuple(doc["a"]), b)


_BRACKET = re.compile(
    r"^\[\s*(?P<page>[^,\[\]()]+?)\s*,\s*(?:\((?P<vec>[^()]*)\)|(?P<scalar>[-+]?\d+))\s*,\s*(?P<b>[-+]?\d+)\s*\]$"
)
_SPINE_NAMES = {SPINE, "spine", "null"}


def parse_valuation(text: str, curve: Curve, rank: int) -> HypPoint:
    """Parse ``[page, a, b]`` (``a`` in parentheses for rank > 1) or a JSON document."""
    s = text.strip().replace("−", "-")
    if s.startswith("{"):
        try:
            doc = json.loads(s)
        except json.JSONDecodeError as exc:
            raise DocumentError([Violation("", f"invalid JSON: {exc}")]) from exc
        return valuation_from_json(doc, curve, rank)
    m = _BRACKET.match(s)
    if m is None:
        raise DocumentError([Violation("", f"cannot read valuation {text!r}")])
    raw = m["scalar"] if m["scalar"] is not None else m["vec"]
    try:
        a = [int(x) for x in raw.split(",")] if raw.strip() else []
    except ValueError as exc:
        raise DocumentError([Violation("/a", f"not an integer vector: {raw!r}")]) from exc
    page = None if m["page"] in _SPINE_NAMES else m["page"]
    return valuation_from_json({"page": page, "a": a, "b": int(m["b"])}, curve, rank)


def valuation_to_json(nu: HypPoint) -> dict:
    return {"page": None if nu.on_spine else nu.page, "a": list(nu.a), "b": nu.b}


# --- serialization --------------------------------------------------------


def _rays(c: Cone) -> list[list[int]]:
    return [list(r) for r in c.rays]


def _polyhedron(p: Polyhedron) -> dict | None:
    if p.empty:
        return None
    return {
        "vertices": [[format_rational(x) for x in v] for v in p.vertices],
        "rays": _rays(p.tail),
    }


def _member(d: PolyDivisor) -> dict:
    return {
        "tail": {"rays": _rays(d.tail)},
        "coefficients": {y: _polyhedron(p) for y, p in sorted(d.coefficients.items())},
        "locus": d.locus,
    }


def _curve_doc(c: Curve) -> dict:
    return {"genus": c.genus, "points": list(c.points)}


def divisor_to_json(d: PolyDivisor | DivisorialFan) -> dict:
    if isinstance(d, DivisorialFan):
        return {
            "rank": d.rank,
            "curve": _curve_doc(d.curve),
            # member order is an artefact of the intersection closure
            "divisors": sorted((_member(m) for m in d.divisors), key=lambda m: json.dumps(m, sort_keys=True)),
        }
    return {"rank": d.rank, "curve": _curve_doc(d.curve), **_member(d)}


def fan_to_json(fan: Fan) -> dict:
    cones = sorted(sorted(list(r) for r in c.rays) for c in fan.maximal_cones())
    return {"maximal_cones": cones}


def witness_to_json(w) -> dict:
    """Serialize a ResolutionWitness; the assembled fan uses the input fan schema."""
    return {
        "divisor": divisor_to_json(w.divisor),
        "pages": list(w.pages),
        "extra_point": w.extra_point,
        "page_fans": {y: fan_to_json(f) for y, f in w.fans.items()},
        "traces": {
            y: {"branch": t.branch, "centers": [list(c) for c in t.centers], "start": fan_to_json(t.start)}
            for y, t in w.traces.items()
        },
        "fan": divisor_to_json(w.fan),
    }


def check_witness_document(doc: Any) -> None:
    _check(doc, "witness")


def jsonable(x: Any) -> Any:
    """Plain JSON value for certificates and other nested results."""
    if x is None or isinstance(x, (bool, int, str)):
        return x
    if isinstance(x, Fraction):
        return format_rational(x)
    if isinstance(x, HypPoint):
        return valuation_to_json(x)
    if isinstance(x, Cone):
        return {"rays": _rays(x)}
    if isinstance(x, Polyhedron):
        return _polyhedron(x)
    if isinstance(x, Mapping):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    return str(x)


def _emit(x: Any, depth: int) -> str:
    pad, inner = "  " * depth, "  " * (depth + 1)
    if isinstance(x, dict):
        if not x:
            return "{}"
        items = [f"{inner}{json.dumps(k, ensure_ascii=False)}: {_emit(x[k], depth + 1)}" for k in sorted(x)]
        return "{\n" + ",\n".join(items) + f"\n{pad}}}"
    if isinstance(x, list):
        if all(not isinstance(v, (dict, list)) for v in x):
            return json.dumps(x, ensure_ascii=False, separators=(", ", ": "))
        return "[\n" + ",\n".join(inner + _emit(v, depth + 1) for v in x) + f"\n{pad}]"
    return json.dumps(x, ensure_ascii=False)


def dumps(doc: Any) -> str:
    """Canonical UTF-8 JSON: sorted keys, scalar arrays kept on one line."""
    return _emit(doc, 0) + "\n"


def serialize(d: PolyDivisor | DivisorialFan) -> str:
    return dumps(divisor_to_json(d))


__all__ = [
    "DocumentError",
    "EXAMPLES",
    "Violation",
    "check_witness_document",
    "divisor_from_json",
    "divisor_to_json",
    "dumps",
    "example_text",
    "fan_to_json",
    "jsonable",
    "load_example",
    "parse_input",
    "parse_valuation",
    "schema",
    "schema_violations",
    "serialize",
    "valuation_from_json",
    "valuation_to_json",
    "witness_to_json",
]
