"""Metric graphs with rational edge lengths: divisors, integer-slope piecewise
linear functions, reduced divisors, rank, and edge-reduced chip transport.

All arithmetic is exact (fractions.Fraction); nothing here touches floats.
Rank and reduction are computed on a unit subdivision at the common
denominator of the lengths and point offsets, where vertex-supported metric
divisors agree with their graph-theoretic counterparts.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .chains import ChainStructure, SubdividedGraph, subdivide
from .errors import (
    InternalInvariantError,
    InvalidSlope,
    NotEdgeReduced,
    PreconditionFailed,
    UnknownEdge,
    UnknownVertex,
)
from .graphs import Divisor, MultiGraph, rank, reduce_divisor


def _lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)


class MetricPoint:
    """A point of the metric graph, canonicalized so that edge endpoints are
    always represented as vertex points."""

    __slots__ = ("vertex", "edge", "offset")

    def __init__(self, vertex: Optional[str], edge: Optional[str], offset):
        self.vertex = vertex
        self.edge = edge
        self.offset = None if offset is None else Fraction(offset)

    @property
    def is_vertex(self) -> bool:
        return self.vertex is not None

    def key(self):
        if self.is_vertex:
            return ("v", self.vertex)
        return ("e", self.edge, self.offset)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, MetricPoint) and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def __lt__(self, other: "MetricPoint") -> bool:
        return self.key() < other.key()

    def __repr__(self) -> str:
        if self.is_vertex:
            return f"MetricPoint({self.vertex!r})"
        return f"MetricPoint({self.edge!r}, {self.offset})"


class MetricDivisor:
    """Finite integer combination of metric points."""

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: Optional[Mapping[MetricPoint, int]] = None):
        self._coeffs = {p: int(c) for p, c in (coeffs or {}).items() if c != 0}

    def __getitem__(self, p: MetricPoint) -> int:
        return self._coeffs.get(p, 0)

    def items(self):
        return sorted(self._coeffs.items(), key=lambda pc: pc[0].key())

    def coeffs(self) -> Dict[MetricPoint, int]:
        return dict(self._coeffs)

    @property
    def degree(self) -> int:
        return sum(self._coeffs.values())

    def is_effective(self) -> bool:
        return all(c >= 0 for c in self._coeffs.values())

    def support(self) -> Tuple[MetricPoint, ...]:
        return tuple(sorted(self._coeffs, key=MetricPoint.key))

    def __add__(self, other: "MetricDivisor") -> "MetricDivisor":
        out = dict(self._coeffs)
        for p, c in other._coeffs.items():
            out[p] = out.get(p, 0) + c
        return MetricDivisor(out)

    def __sub__(self, other: "MetricDivisor") -> "MetricDivisor":
        out = dict(self._coeffs)
        for p, c in other._coeffs.items():
            out[p] = out.get(p, 0) - c
        return MetricDivisor(out)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, MetricDivisor) and self._coeffs == other._coeffs

    def __hash__(self) -> int:
        return hash(frozenset(self._coeffs.items()))

    def __repr__(self) -> str:
        inner = " + ".join(f"{c}*{p!r}" for p, c in self.items())
        return f"MetricDivisor({inner or '0'})"


class MetricGraph:
    """A loopless connected model graph with positive rational edge lengths."""

    def __init__(self, model: MultiGraph, lengths: Mapping[str, object]):
        self.model = model
        self.lengths: Dict[str, Fraction] = {}
        for e in model.edge_ids:
            if e not in lengths:
                raise UnknownEdge(f"missing length for edge {e!r}")
            val = Fraction(lengths[e])
            if val <= 0:
                raise ValueError(f"edge {e!r} has nonpositive length {val}")
            self.lengths[e] = val
        extra = sorted(set(lengths) - set(model.edge_ids))
        if extra:
            raise UnknownEdge(f"lengths given for unknown edges: {extra}")

    @classmethod
    def from_edge_data(
        cls,
        vertices: Sequence,
        edges: Sequence[Tuple[str, str, str, object]],
    ) -> "MetricGraph":
        """Build from raw lists; loop edges are split at a midpoint vertex."""
        vs = [(v, 0) if isinstance(v, str) else (v[0], int(v[1])) for v in vertices]
        out_edges: List[Tuple[str, str, str]] = []
        lengths: Dict[str, Fraction] = {}
        for eid, tail, head, length in edges:
            length = Fraction(length)
            if tail == head:
                mid = f"{eid}:mid"
                vs.append((mid, 0))
                out_edges.append((f"{eid}:1", tail, mid))
                out_edges.append((f"{eid}:2", mid, head))
                lengths[f"{eid}:1"] = length / 2
                lengths[f"{eid}:2"] = length / 2
            else:
                out_edges.append((eid, tail, head))
                lengths[eid] = length
        return cls(MultiGraph(vs, out_edges), lengths)

    def genus(self) -> int:
        return self.model.first_betti()

    def vertex_point(self, v: str) -> MetricPoint:
        self.model.check_vertex(v)
        return MetricPoint(v, None, None)

    def point(self, edge: str, offset) -> MetricPoint:
        """Canonical point on an edge at the given distance from its tail."""
        if edge not in self.lengths:
            raise UnknownEdge(f"unknown edge {edge!r}")
        offset = Fraction(offset)
        length = self.lengths[edge]
        if offset < 0 or offset > length:
            raise ValueError(f"offset {offset} outside [0, {length}] on {edge!r}")
        if offset == 0:
            return self.vertex_point(self.model.tail(edge))
        if offset == length:
            return self.vertex_point(self.model.head(edge))
        return MetricPoint(None, edge, offset)

    def base_point(self) -> MetricPoint:
        return self.vertex_point(self.model.base_vertex())

    def canonical_divisor(self) -> MetricDivisor:
        """valence - 2 at each model vertex; degree 2g - 2."""
        return MetricDivisor(
            {
                self.vertex_point(v): self.model.valence(v) - 2
                for v in self.model.vertex_ids
            }
        )

    # -- lattice models -------------------------------------------------

    def common_denominator(self, *divisors: MetricDivisor) -> int:
        n = 1
        for length in self.lengths.values():
            n = _lcm(n, length.denominator)
        for d in divisors:
            for p in d.support():
                if not p.is_vertex:
                    n = _lcm(n, p.offset.denominator)
        return n

    def lattice(self, n: int) -> "LatticeModel":
        return LatticeModel(self, n)


class LatticeModel:
    """Unit subdivision of a metric graph at spacing 1/n.

    Every edge of the model is cut into length*n segments, so every metric
    point with offset denominator dividing n is a lattice vertex.
    """

    def __init__(self, mg: MetricGraph, n: int):
        self.mg = mg
        self.n = int(n)
        counts = {}
        for e, length in mg.lengths.items():
            segments = length * self.n
            if segments.denominator != 1:
                raise ValueError(f"denominator {self.n} does not clear edge {e!r}")
            counts[e] = int(segments)
        self.sub: SubdividedGraph = subdivide(
            mg.model, ChainStructure(mg.model, counts)
        )
        self.graph: MultiGraph = self.sub.graph
        self.segments = counts

    def to_lattice_vertex(self, p: MetricPoint) -> str:
        if p.is_vertex:
            return p.vertex
        idx = p.offset * self.n
        if idx.denominator != 1:
            raise ValueError(f"point {p!r} is not on the 1/{self.n} lattice")
        return self.sub.chain_vertices(p.edge)[int(idx) - 1]

    def to_metric_point(self, vid: str) -> MetricPoint:
        if self.mg.model.has_vertex(vid):
            return self.mg.vertex_point(vid)
        e, i = self.sub.parent_edge(vid)
        return self.mg.point(e, Fraction(i, self.n))

    def to_lattice_divisor(self, d: MetricDivisor) -> Divisor:
        out: Dict[str, int] = {}
        for p, c in d.coeffs().items():
            key = self.to_lattice_vertex(p)
            out[key] = out.get(key, 0) + c
        return Divisor(out)

    def to_metric_divisor(self, d: Divisor) -> MetricDivisor:
        return MetricDivisor(
            {self.to_metric_point(v): c for v, c in d.coeffs().items()}
        )

    def lattice_points(self) -> Tuple[MetricPoint, ...]:
        return tuple(self.to_metric_point(v) for v in self.graph.vertex_ids)


class PLFunction:
    """Continuous piecewise linear function with integer slopes.

    Stored per edge as breakpoint lists [(offset, value), ...] covering the
    whole edge from offset 0 to its length; values are exact rationals.
    """

    def __init__(
        self,
        mg: MetricGraph,
        pieces: Mapping[str, Sequence[Tuple[object, object]]],
        isolated: Optional[Mapping[str, object]] = None,
    ):
        self.mg = mg
        self.pieces: Dict[str, List[Tuple[Fraction, Fraction]]] = {}
        for e in mg.model.edge_ids:
            if e not in pieces:
                raise UnknownEdge(f"missing pieces for edge {e!r}")
            pts = [(Fraction(o), Fraction(v)) for o, v in pieces[e]]
            pts.sort(key=lambda ov: ov[0])
            if pts[0][0] != 0 or pts[-1][0] != mg.lengths[e]:
                raise ValueError(f"pieces on {e!r} must span the whole edge")
            for (o1, _), (o2, _) in zip(pts, pts[1:]):
                if o1 == o2:
                    raise ValueError(f"duplicate breakpoint on {e!r} at {o1}")
            self.pieces[e] = pts
        # a connected model without edges is a single point; its value cannot
        # be read off any edge, so it is carried separately
        self._isolated: Dict[str, Fraction] = {}
        if not mg.model.edge_ids:
            for v in mg.model.vertex_ids:
                self._isolated[v] = Fraction((isolated or {}).get(v, 0))
        self._check_vertex_continuity()
        self._check_integer_slopes()

    def _check_vertex_continuity(self) -> None:
        seen: Dict[str, Fraction] = {}
        for e, pts in self.pieces.items():
            tail, head = self.mg.model.ends(e)
            for v, value in ((tail, pts[0][1]), (head, pts[-1][1])):
                if v in seen and seen[v] != value:
                    raise ValueError(f"discontinuous at vertex {v!r}")
                seen[v] = value

    def _check_integer_slopes(self) -> None:
        for e, pts in self.pieces.items():
            for (o1, v1), (o2, v2) in zip(pts, pts[1:]):
                slope = (v2 - v1) / (o2 - o1)
                if slope.denominator != 1:
                    raise InvalidSlope(
                        f"slope {slope} on edge {e!r} is not an integer"
                    )

    @classmethod
    def constant(cls, mg: MetricGraph, value=0) -> "PLFunction":
        value = Fraction(value)
        return cls(
            mg,
            {e: [(0, value), (mg.lengths[e], value)] for e in mg.model.edge_ids},
            isolated={v: value for v in mg.model.vertex_ids},
        )

    def vertex_value(self, v: str) -> Fraction:
        if v in self._isolated:
            return self._isolated[v]
        for e, pts in self.pieces.items():
            tail, head = self.mg.model.ends(e)
            if v == tail:
                return pts[0][1]
            if v == head:
                return pts[-1][1]
        raise UnknownVertex(f"vertex {v!r} not attached to any edge")

    def value_at(self, p: MetricPoint) -> Fraction:
        if p.is_vertex:
            return self.vertex_value(p.vertex)
        pts = self.pieces[p.edge]
        for (o1, v1), (o2, v2) in zip(pts, pts[1:]):
            if o1 <= p.offset <= o2:
                return v1 + (v2 - v1) * (p.offset - o1) / (o2 - o1)
        raise ValueError("offset outside the edge")

    def is_constant(self) -> bool:
        values = {v for pts in self.pieces.values() for _, v in pts}
        return len(values) <= 1

    def _map(self, other: Optional["PLFunction"], op) -> "PLFunction":
        pieces = {}
        for e, pts in self.pieces.items():
            if other is None:
                pieces[e] = [(o, op(v, None)) for o, v in pts]
                continue
            offsets = sorted({o for o, _ in pts} | {o for o, _ in other.pieces[e]})
            pieces[e] = [
                (o, op(self._edge_value(e, o), other._edge_value(e, o)))
                for o in offsets
            ]
        isolated = {
            v: op(val, None if other is None else other._isolated[v])
            for v, val in self._isolated.items()
        }
        return PLFunction(self.mg, pieces, isolated=isolated)

    def _edge_value(self, e: str, offset: Fraction) -> Fraction:
        pts = self.pieces[e]
        for (o1, v1), (o2, v2) in zip(pts, pts[1:]):
            if o1 <= offset <= o2:
                return v1 + (v2 - v1) * (offset - o1) / (o2 - o1)
        raise ValueError("offset outside the edge")

    def __add__(self, other: "PLFunction") -> "PLFunction":
        return self._map(other, lambda a, b: a + b)

    def __sub__(self, other: "PLFunction") -> "PLFunction":
        return self._map(other, lambda a, b: a - b)

    def shift(self, constant) -> "PLFunction":
        constant = Fraction(constant)
        return self._map(None, lambda a, _: a + constant)

    def simplify(self) -> "PLFunction":
        """Drop interior breakpoints where the slope does not change."""
        pieces = {}
        for e, pts in self.pieces.items():
            kept = [pts[0]]
            for k in range(1, len(pts) - 1):
                o0, v0 = kept[-1]
                o1, v1 = pts[k]
                o2, v2 = pts[k + 1]
                if (v1 - v0) * (o2 - o1) != (v2 - v1) * (o1 - o0):
                    kept.append(pts[k])
            kept.append(pts[-1])
            pieces[e] = kept
        return PLFunction(self.mg, pieces, isolated=self._isolated)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PLFunction):
            return NotImplemented
        return (
            self.simplify().pieces == other.simplify().pieces
            and self._isolated == other._isolated
        )

    def __repr__(self) -> str:
        return f"PLFunction({len(self.pieces)} edges)"


def pl_divisor(f: PLFunction) -> MetricDivisor:
    """Divisor of a piecewise linear function: sum of outgoing slopes at each point."""
    mg = f.mg
    acc: Dict[MetricPoint, int] = {}

    def bump(p: MetricPoint, c: Fraction) -> None:
        if c.denominator != 1:
            raise InvalidSlope(f"non-integer outgoing slope sum at {p!r}")
        if c:
            acc[p] = acc.get(p, 0) + int(c)

    for e, pts in f.pieces.items():
        tail, head = mg.model.ends(e)
        first_slope = (pts[1][1] - pts[0][1]) / (pts[1][0] - pts[0][0])
        last_slope = (pts[-1][1] - pts[-2][1]) / (pts[-1][0] - pts[-2][0])
        bump(mg.vertex_point(tail), first_slope)
        bump(mg.vertex_point(head), -last_slope)
        for k in range(1, len(pts) - 1):
            o0, v0 = pts[k - 1]
            o1, v1 = pts[k]
            o2, v2 = pts[k + 1]
            left = (v1 - v0) / (o1 - o0)
            right = (v2 - v1) / (o2 - o1)
            bump(mg.point(e, o1), right - left)
    out = MetricDivisor(acc)
    if out.degree != 0:
        raise InternalInvariantError("pl divisor has nonzero degree")
    return out


def _firing_counts_to_pl(lat: LatticeModel, counts) -> PLFunction:
    """Lift graph firing counts on the lattice to a PL function (value t/n)."""
    mg = lat.mg
    n = Fraction(lat.n)
    pieces = {}
    for e in mg.model.edge_ids:
        stops = [mg.model.tail(e), *lat.sub.chain_vertices(e), mg.model.head(e)]
        pieces[e] = [
            (Fraction(i, lat.n), Fraction(counts[v]) / n)
            for i, v in enumerate(stops)
        ]
    isolated = {v: Fraction(counts[v]) / n for v in mg.model.vertex_ids}
    return PLFunction(mg, pieces, isolated=isolated).simplify()


def reduce_metric(
    mg: MetricGraph, d: MetricDivisor, q: MetricPoint
) -> Tuple[MetricDivisor, PLFunction]:
    """The q-reduced representative plus a PL witness f with d + div f = result
    and f(q) = 0."""
    n = mg.common_denominator(d, MetricDivisor({q: 1}))
    lat = mg.lattice(n)
    reduced, counts = reduce_divisor(
        lat.graph, lat.to_lattice_divisor(d), lat.to_lattice_vertex(q)
    )
    f = _firing_counts_to_pl(lat, counts)
    f = f.shift(-f.value_at(q))
    out = lat.to_metric_divisor(reduced)
    if d + pl_divisor(f) != out:
        raise InternalInvariantError("metric reduction witness failed to replay")
    return out, f


def metric_rank(mg: MetricGraph, d: MetricDivisor, refine_check: bool = False) -> int:
    """Rank of a metric divisor, computed on the unit subdivision at the
    common denominator; model vertex sets are rank-determining."""
    n = mg.common_denominator(d)
    lat = mg.lattice(n)
    value = rank(lat.graph, lat.to_lattice_divisor(d))
    if refine_check:
        lat2 = mg.lattice(2 * n)
        if rank(lat2.graph, lat2.to_lattice_divisor(d)) != value:
            raise InternalInvariantError("rank changed under lattice refinement")
    return value


def metric_linear_equiv(
    mg: MetricGraph, a: MetricDivisor, b: MetricDivisor
) -> Optional[PLFunction]:
    """PL function f with b - a = div f, or None when the classes differ."""
    if a.degree != b.degree:
        return None
    q = mg.base_point()
    ra, fa = reduce_metric(mg, a, q)
    rb, fb = reduce_metric(mg, b, q)
    if ra != rb:
        return None
    f = (fa - fb).simplify()
    if a + pl_divisor(f) != b:
        raise InternalInvariantError("metric equivalence witness failed to replay")
    return f


# -- edge-reduced divisors and chip transport ---------------------------


def check_edge_reduced(mg: MetricGraph, d: MetricDivisor) -> None:
    """Edge-reduced: effective on open edges with at most one unit chip each."""
    per_edge: Dict[str, List[Tuple[Fraction, int]]] = {}
    for p, c in d.coeffs().items():
        if p.is_vertex:
            continue
        if c < 0:
            raise NotEdgeReduced(f"negative coefficient at interior point {p!r}")
        per_edge.setdefault(p.edge, []).append((p.offset, c))
    for e, chips in per_edge.items():
        if sum(c for _, c in chips) > 1:
            raise NotEdgeReduced(f"open edge {e!r} carries degree > 1")


def _edge_chip(d: MetricDivisor, e: str) -> Optional[Fraction]:
    for p, c in d.coeffs().items():
        if not p.is_vertex and p.edge == e and c > 0:
            return p.offset
    return None


def move_chips_edge_reduced(
    mg: MetricGraph, d: MetricDivisor, c: Mapping[str, object]
) -> Tuple[MetricDivisor, PLFunction]:
    """Apply the unique PL function with prescribed vertex values that keeps
    the divisor edge-reduced.

    Per edge, the interior chip (position measured from the higher-valued
    endpoint, or 0 when absent) slides a distance equal to the value drop,
    wrapping modulo the length; each wrap absorbs a chip at the lower end and
    borrows a fresh one from the higher end.
    """
    check_edge_reduced(mg, d)
    values = {v: Fraction(c[v]) for v in mg.model.vertex_ids if v in c}
    missing = sorted(set(mg.model.vertex_ids) - set(values))
    if missing:
        raise UnknownVertex(f"missing chip-transport values for vertices: {missing}")

    new_coeffs: Dict[MetricPoint, int] = {
        p: coeff for p, coeff in d.coeffs().items() if p.is_vertex
    }
    pieces: Dict[str, List[Tuple[Fraction, Fraction]]] = {}

    def add(p: MetricPoint, delta: int) -> None:
        if delta:
            new_coeffs[p] = new_coeffs.get(p, 0) + delta

    for e in mg.model.edge_ids:
        tail, head = mg.model.ends(e)
        length = mg.lengths[e]
        cu, cw = values[tail], values[head]
        chip = _edge_chip(d, e)
        if cu == cw:
            pieces[e] = [(Fraction(0), cu), (length, cw)]
            if chip is not None:
                add(mg.point(e, chip), 1)
            continue
        high, low = (tail, head) if cu > cw else (head, tail)
        mu = abs(cu - cw)
        if chip is None:
            p0 = Fraction(0)
        else:
            p0 = chip if high == tail else length - chip
        s = p0 + mu
        landing = s % length

        stops = {Fraction(0), length}
        if 0 < p0 < length:
            stops.add(p0)
        if 0 < landing < length:
            stops.add(landing)
        stops = sorted(stops)
        # passage count of the chip trajectory over each open interval
        def passes(t: Fraction) -> int:
            base = (s - t) / length
            count = math.floor(base)
            if t >= p0:
                count += 1
            return count

        value_at: List[Tuple[Fraction, Fraction]] = [(Fraction(0), values[high])]
        for t1, t2 in zip(stops, stops[1:]):
            m = passes((t1 + t2) / 2)
            prev_t, prev_v = value_at[-1]
            value_at.append((t2, prev_v - m * (t2 - t1)))
        if value_at[-1][1] != values[low]:
            raise InternalInvariantError("chip transport does not meet far value")

        if high == tail:
            pieces[e] = value_at
        else:
            pieces[e] = [(length - t, v) for t, v in reversed(value_at)]

        if 0 < landing < length:
            offset = landing if high == tail else length - landing
            add(mg.point(e, offset), 1)
        m_first = passes(stops[0] + (stops[1] - stops[0]) / 2)
        m_last = passes(stops[-2] + (stops[-1] - stops[-2]) / 2)
        add(mg.vertex_point(high), -m_first)
        add(mg.vertex_point(low), m_last)

    out = MetricDivisor(new_coeffs)
    f = PLFunction(mg, pieces, isolated=values).simplify()
    check_edge_reduced(mg, out)
    if d + pl_divisor(f) != out:
        raise InternalInvariantError("chip transport witness failed to replay")
    return out, f


def equiv_decompose(
    mg: MetricGraph,
    d: MetricDivisor,
    d_prime: MetricDivisor,
    f: PLFunction,
) -> Dict[str, object]:
    """Decompose the equivalence d' = d + div f into per-vertex chip-transport
    stages, certifying interpolated effectivity, tie constancy, one-sided
    effectivity, and termination.

    Vertices are processed in order of decreasing f-value; stage j moves the
    first j vertices down to the next value level.
    """
    try:
        check_edge_reduced(mg, d)
    except NotEdgeReduced as exc:
        raise PreconditionFailed(f"d is not edge-reduced: {exc}") from exc
    try:
        check_edge_reduced(mg, d_prime)
    except NotEdgeReduced as exc:
        raise PreconditionFailed(f"d_prime is not edge-reduced: {exc}") from exc
    if not d.is_effective():
        raise PreconditionFailed("d is not effective")
    if not d_prime.is_effective():
        raise PreconditionFailed("d_prime is not effective")
    if d + pl_divisor(f) != d_prime:
        raise PreconditionFailed("f is not an equivalence witness for the pair")

    phi = {v: f.vertex_value(v) for v in mg.model.vertex_ids}
    order = sorted(mg.model.vertex_ids, key=lambda v: (-phi[v], v))
    n = len(order)

    stages: List[MetricDivisor] = [d]
    stage_functions: List[PLFunction] = []
    stage_vectors: List[Dict[str, Fraction]] = []
    current = d
    for j in range(1, n):
        c = {
            v: (phi[order[j - 1]] if i <= j - 1 else phi[order[j]])
            for i, v in enumerate(order)
        }
        nxt, fj = move_chips_edge_reduced(mg, current, c)
        stages.append(nxt)
        stage_functions.append(fj)
        stage_vectors.append(c)
        current = nxt

    certificates = {
        "interpolated_effectivity": True,
        "tie_constancy": True,
        "one_sided_effectivity": True,
        "terminates_at_target": stages[-1] == d_prime,
    }

    # (i) effectivity along each interpolated transport
    for j, c in enumerate(stage_vectors):
        base = stages[j]
        alphas = {Fraction(0), Fraction(1)}
        for e in mg.model.edge_ids:
            tail, head = mg.model.ends(e)
            mu = abs(c[tail] - c[head])
            if mu == 0:
                continue
            length = mg.lengths[e]
            chip = _edge_chip(base, e)
            if chip is None:
                p0 = Fraction(0)
            elif c[tail] > c[head]:
                p0 = chip
            else:
                p0 = length - chip
            k = 1
            while (k * length - p0) / mu <= 1:
                alpha = (k * length - p0) / mu
                if alpha > 0:
                    alphas.add(alpha)
                k += 1
        grid = sorted(alphas)
        grid += [
            (a1 + a2) / 2 for a1, a2 in zip(grid, grid[1:])
        ]
        for alpha in sorted(grid):
            scaled = {v: alpha * c[v] for v in c}
            probe, _ = move_chips_edge_reduced(mg, base, scaled)
            if not probe.is_effective():
                certificates["interpolated_effectivity"] = False

    # (ii) ties in the vertex values force constant stage functions
    for i1 in range(n):
        for i2 in range(i1 + 1, n):
            if phi[order[i1]] == phi[order[i2]]:
                for j in range(i1, i2):
                    if j < len(stage_functions) and not stage_functions[j].is_constant():
                        certificates["tie_constancy"] = False

    # (iii) one-sided effectivity at the vertex-degree level
    for i in range(1, n + 1):
        di = stages[i - 1]
        for j, v in enumerate(order, start=1):
            pv = mg.vertex_point(v)
            if j >= i and (di - d)[pv] < 0:
                certificates["one_sided_effectivity"] = False
            if j <= i and (di - d_prime)[pv] < 0:
                certificates["one_sided_effectivity"] = False

    return {
        "order": order,
        "stages": stages,
        "stage_functions": stage_functions,
        "certificates": certificates,
    }
