"""JSON encodings and the divisor shorthand shared by the service and the CLI.

Rationals travel as integers or "p/q" strings; floats and decimal strings are
rejected so results stay exact.  Unknown fields in any object are rejected.
All emitted documents carry a "schema": "tropdeg/1" marker.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Dict, List, Mapping, Tuple

from .chains import AdmissibleMultidegree, ChainStructure
from .errors import ParseError
from .graphs import Divisor, MultiGraph, TwistVector
from .metric import MetricDivisor, MetricGraph, MetricPoint, PLFunction
from .twistgraph import NodeDivisor, NodePoint

SCHEMA = "tropdeg/1"

_RATIONAL = re.compile(r"^-?\d+(/\d+)?$")


def _guarded(parser):
    """Structurally wrong JSON surfaces as ParseError, not a raw traceback."""

    def wrapped(*args, **kwargs):
        try:
            return parser(*args, **kwargs)
        except (TypeError, ValueError, AttributeError, KeyError) as exc:
            raise ParseError(
                f"{parser.__name__.replace('parse_', '').replace('_', ' ')}: "
                f"malformed document ({exc})"
            ) from exc

    wrapped.__name__ = parser.__name__
    wrapped.__doc__ = parser.__doc__
    return wrapped


def parse_rational(value) -> Fraction:
    if isinstance(value, bool):
        raise ParseError(f"not a rational: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        if not _RATIONAL.match(value.strip()):
            raise ParseError(
                f"rationals must be integers or 'p/q' strings, got {value!r}"
            )
        return Fraction(value)
    raise ParseError(f"rationals must be integers or 'p/q' strings, got {value!r}")


def emit_rational(value: Fraction) -> str:
    return f"{value.numerator}/{value.denominator}" if value.denominator != 1 else str(
        value.numerator
    )


def _require_keys(obj: Mapping, required, optional=frozenset(), what="object"):
    if not isinstance(obj, Mapping):
        raise ParseError(f"{what} must be a JSON object, got {type(obj).__name__}")
    keys = set(obj) - {"schema"}
    missing = set(required) - keys
    if missing:
        raise ParseError(f"{what} is missing fields: {sorted(missing)}")
    unknown = keys - set(required) - set(optional)
    if unknown:
        raise ParseError(f"{what} has unknown fields: {sorted(unknown)}")


# -- graphs ----------------------------------------------------------------


@_guarded
def parse_graph(obj: Mapping) -> MultiGraph:
    _require_keys(obj, {"vertices", "edges"}, what="graph")
    vertices = []
    for item in obj["vertices"]:
        _require_keys(item, {"id"}, {"genus"}, what="vertex")
        vertices.append((str(item["id"]), int(item.get("genus", 0))))
    edges = []
    for item in obj["edges"]:
        _require_keys(item, {"id", "tail", "head"}, what="edge")
        edges.append((str(item["id"]), str(item["tail"]), str(item["head"])))
    return MultiGraph(vertices, edges)


def emit_graph(graph: MultiGraph) -> Dict:
    return {
        "schema": SCHEMA,
        "vertices": [
            {"id": v, "genus": graph.vertex_genus(v)} for v in graph.vertex_ids
        ],
        "edges": [
            {"id": e, "tail": graph.tail(e), "head": graph.head(e)}
            for e in graph.edge_ids
        ],
    }


@_guarded
def parse_divisor(obj: Mapping) -> Divisor:
    _require_keys(obj, {"coeffs"}, what="divisor")
    return Divisor({str(v): int(c) for v, c in obj["coeffs"].items()})


def emit_divisor(d: Divisor) -> Dict:
    return {"schema": SCHEMA, "coeffs": {v: c for v, c in sorted(d.coeffs().items())}}


@_guarded
def parse_twist_vector(obj: Mapping) -> TwistVector:
    _require_keys(obj, {"counts"}, what="twist vector")
    return TwistVector({str(v): int(c) for v, c in obj["counts"].items()})


def emit_twist_vector(t: TwistVector) -> Dict:
    return {"schema": SCHEMA, "counts": {v: c for v, c in sorted(t.counts().items())}}


# -- chain structures and admissible multidegrees ---------------------------


@_guarded
def parse_chain(obj: Mapping, graph: MultiGraph) -> ChainStructure:
    _require_keys(obj, {"n"}, what="chain structure")
    return ChainStructure(graph, {str(e): int(c) for e, c in obj["n"].items()})


def emit_chain(chain: ChainStructure) -> Dict:
    return {"schema": SCHEMA, "n": dict(sorted(chain.counts().items()))}


@_guarded
def parse_admissible(
    obj: Mapping, graph: MultiGraph, chain: ChainStructure
) -> AdmissibleMultidegree:
    _require_keys(obj, {"w"}, {"mu", "d"}, what="admissible multidegree")
    adm = AdmissibleMultidegree(
        graph,
        chain,
        {str(v): int(c) for v, c in obj["w"].items()},
        {str(e): int(m) for e, m in obj.get("mu", {}).items()},
    )
    if "d" in obj and int(obj["d"]) != adm.degree:
        raise ParseError(
            f"stated degree {obj['d']} does not match computed {adm.degree}"
        )
    return adm


def emit_admissible(adm: AdmissibleMultidegree) -> Dict:
    return {
        "schema": SCHEMA,
        "w": dict(sorted(adm.vertex_part().items())),
        "mu": {e: m for e, m in sorted(adm.chain_part().items()) if m},
        "d": adm.degree,
    }


# -- metric graphs -----------------------------------------------------------


@_guarded
def parse_metric_graph(obj: Mapping) -> MetricGraph:
    _require_keys(obj, {"vertices", "edges", "lengths"}, what="metric graph")
    graph = parse_graph({"vertices": obj["vertices"], "edges": obj["edges"]})
    lengths = {str(e): parse_rational(v) for e, v in obj["lengths"].items()}
    return MetricGraph(graph, lengths)


def emit_metric_graph(mg: MetricGraph) -> Dict:
    out = emit_graph(mg.model)
    out["lengths"] = {e: emit_rational(l) for e, l in sorted(mg.lengths.items())}
    return out


@_guarded
def parse_metric_point(obj: Mapping, mg: MetricGraph) -> MetricPoint:
    if "vertex" in obj:
        _require_keys(obj, {"vertex"}, what="metric point")
        return mg.vertex_point(str(obj["vertex"]))
    _require_keys(obj, {"edge", "offset"}, what="metric point")
    return mg.point(str(obj["edge"]), parse_rational(obj["offset"]))


def emit_metric_point(p: MetricPoint) -> Dict:
    if p.is_vertex:
        return {"vertex": p.vertex}
    return {"edge": p.edge, "offset": emit_rational(p.offset)}


@_guarded
def parse_metric_divisor(items: List[Mapping], mg: MetricGraph) -> MetricDivisor:
    coeffs: Dict[MetricPoint, int] = {}
    for item in items:
        if "vertex" in item:
            _require_keys(item, {"vertex", "coeff"}, what="metric divisor term")
            p = mg.vertex_point(str(item["vertex"]))
        else:
            _require_keys(item, {"edge", "offset", "coeff"}, what="metric divisor term")
            p = mg.point(str(item["edge"]), parse_rational(item["offset"]))
        coeffs[p] = coeffs.get(p, 0) + int(item["coeff"])
    return MetricDivisor(coeffs)


def emit_metric_divisor(d: MetricDivisor) -> List[Dict]:
    out = []
    for p, c in d.items():
        term = emit_metric_point(p)
        term["coeff"] = c
        out.append(term)
    return out


def emit_pl_function(f: PLFunction) -> Dict:
    simplified = f.simplify()
    return {
        "schema": SCHEMA,
        "pieces": {
            e: [[emit_rational(o), emit_rational(v)] for o, v in pts]
            for e, pts in sorted(simplified.pieces.items())
        },
    }


@_guarded
def parse_pl_function(obj: Mapping, mg: MetricGraph) -> PLFunction:
    _require_keys(obj, {"pieces"}, what="pl function")
    pieces = {
        str(e): [(parse_rational(o), parse_rational(v)) for o, v in pts]
        for e, pts in obj["pieces"].items()
    }
    return PLFunction(mg, pieces)


# -- node divisors -----------------------------------------------------------


@_guarded
def parse_node_divisor(items: List[Mapping]) -> NodeDivisor:
    coeffs: Dict[NodePoint, int] = {}
    for item in items:
        _require_keys(item, {"vertex", "edge", "coeff"}, what="node divisor term")
        p = NodePoint(str(item["vertex"]), str(item["edge"]))
        coeffs[p] = coeffs.get(p, 0) + int(item["coeff"])
    return NodeDivisor(coeffs)


def emit_node_divisor(d: NodeDivisor) -> List[Dict]:
    return [
        {"vertex": p.vertex, "edge": p.edge, "coeff": c}
        for p, c in sorted(d.coeffs().items(), key=lambda pc: pc[0].key())
    ]


# -- sides and profiles ------------------------------------------------------


def side_key(edge: Tuple[str, str], v: str) -> str:
    a, b = sorted(edge)
    return f"({a}~{b},{v})"


_SIDE = re.compile(r"^\((?P<a>[^~,()]+)~(?P<b>[^~,()]+),(?P<v>[^~,()]+)\)$")


def parse_side_key(key: str) -> Tuple[Tuple[str, str], str]:
    m = _SIDE.match(key)
    if not m:
        raise ParseError(
            f"side keys look like '(u~w,v)' with v an endpoint, got {key!r}"
        )
    edge = tuple(sorted((m.group("a"), m.group("b"))))
    v = m.group("v")
    if v not in edge:
        raise ParseError(f"side vertex {v!r} is not an endpoint of {edge}")
    return edge, v


# -- divisor shorthand -------------------------------------------------------


def _split_terms(text: str) -> List[Tuple[int, str]]:
    """'2@a - b' -> [(2, 'a'), (-1, 'b')]; bare points mean coefficient 1."""
    cleaned = text.replace(" ", "")
    if not cleaned:
        return []
    out = []
    for raw in cleaned.replace("-", "+-").split("+"):
        if not raw:
            continue
        sign = 1
        if raw.startswith("-"):
            sign = -1
            raw = raw[1:]
        if "@" in raw:
            coeff_text, point_text = raw.split("@", 1)
            if coeff_text and not coeff_text.isdigit():
                raise ParseError(f"bad coefficient in shorthand term {raw!r}")
            coeff = int(coeff_text) if coeff_text else 1
        else:
            coeff, point_text = 1, raw
        if not point_text:
            raise ParseError(f"empty point in shorthand term {raw!r}")
        out.append((sign * coeff, point_text))
    return out


def parse_divisor_shorthand(text: str, mg: MetricGraph) -> MetricDivisor:
    """Shorthand like '2@v0 + 1@e1:1/3 - 1@v2'."""
    coeffs: Dict[MetricPoint, int] = {}
    for coeff, point_text in _split_terms(text):
        if ":" in point_text:
            edge, offset = point_text.split(":", 1)
            p = mg.point(edge, parse_rational(offset))
        else:
            p = mg.vertex_point(point_text)
        coeffs[p] = coeffs.get(p, 0) + coeff
    return MetricDivisor(coeffs)


def parse_graph_divisor_shorthand(text: str, graph: MultiGraph) -> Divisor:
    """Shorthand like '2@a - 1@b' for plain graph divisors."""
    coeffs: Dict[str, int] = {}
    for coeff, vertex in _split_terms(text):
        graph.check_vertex(vertex)
        coeffs[vertex] = coeffs.get(vertex, 0) + coeff
    return Divisor(coeffs)
