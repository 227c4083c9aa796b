"""Paths between admissible multidegrees, the finite twist core, node-point
divisors along twist paths, and the dimension-bound twist.

The twist core of a starting multidegree, relative to a family of multidegrees
concentrated at each vertex, consists of the twists whose minimal path to each
concentrated member never twists at that member's vertex.  It is finite, and
when the class has an everywhere-nonnegative member it is nonempty.
"""

from __future__ import annotations

import itertools
from typing import Dict, Iterable, List, Mapping, Optional, Tuple

from .chains import (
    AdmissibleMultidegree,
    ChainStructure,
    admissible_from_divisor,
    apply_twists,
    concentrate,
    induced_divisor,
    is_concentrated,
    subdivide,
    twist,
    twist_equivalent,
)
from .errors import (
    InternalInvariantError,
    NoNonnegativeTwist,
    NotEquivalent,
    UnknownVertex,
)
from .graphs import Divisor, MultiGraph, TwistVector, canonical_divisor, reduce_divisor
from .metric import MetricDivisor, MetricGraph


class NodePoint:
    """The node of the component at v coming from an incident edge of the base graph."""

    __slots__ = ("vertex", "edge")

    def __init__(self, vertex: str, edge: str):
        self.vertex = vertex
        self.edge = edge

    def key(self):
        return (self.vertex, self.edge)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, NodePoint) and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def __lt__(self, other: "NodePoint") -> bool:
        return self.key() < other.key()

    def __repr__(self) -> str:
        return f"NodePoint({self.vertex!r}, {self.edge!r})"


class NodeDivisor:
    """Integer combination of node points on a single component."""

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: Optional[Mapping[NodePoint, int]] = None):
        self._coeffs = {p: int(c) for p, c in (coeffs or {}).items() if c != 0}

    def __getitem__(self, p: NodePoint) -> int:
        return self._coeffs.get(p, 0)

    def coeffs(self) -> Dict[NodePoint, int]:
        return dict(self._coeffs)

    @property
    def degree(self) -> int:
        return sum(self._coeffs.values())

    def is_effective(self) -> bool:
        return all(c >= 0 for c in self._coeffs.values())

    def __add__(self, other: "NodeDivisor") -> "NodeDivisor":
        out = dict(self._coeffs)
        for p, c in other._coeffs.items():
            out[p] = out.get(p, 0) + c
        return NodeDivisor(out)

    def __sub__(self, other: "NodeDivisor") -> "NodeDivisor":
        out = dict(self._coeffs)
        for p, c in other._coeffs.items():
            out[p] = out.get(p, 0) - c
        return NodeDivisor(out)

    def __le__(self, other: "NodeDivisor") -> bool:
        keys = set(self._coeffs) | set(other._coeffs)
        return all(self[p] <= other[p] for p in keys)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, NodeDivisor) and self._coeffs == other._coeffs

    def __hash__(self) -> int:
        return hash(frozenset(self._coeffs.items()))

    def __repr__(self) -> str:
        inner = " + ".join(
            f"{c}*{p!r}" for p, c in sorted(self._coeffs.items(), key=lambda x: x[0].key())
        )
        return f"NodeDivisor({inner or '0'})"


def minimal_path(
    graph: MultiGraph,
    chain: ChainStructure,
    a: AdmissibleMultidegree,
    b: AdmissibleMultidegree,
) -> TwistVector:
    """The unique normal-form twist vector from a to b; raises NotEquivalent."""
    t = twist_equivalent(graph, chain, a, b)
    if t is None:
        raise NotEquivalent("multidegrees are not related by twists")
    return t


class ConcentratedFamily:
    """One multidegree concentrated at each vertex, all in a common twist class."""

    def __init__(
        self,
        graph: MultiGraph,
        chain: ChainStructure,
        members: Mapping[str, AdmissibleMultidegree],
    ):
        missing = sorted(set(graph.vertex_ids) - set(members))
        if missing:
            raise UnknownVertex(f"family lacks members at: {missing}")
        self.graph = graph
        self.chain = chain
        self.members = {v: members[v] for v in graph.vertex_ids}

    @classmethod
    def canonical(
        cls,
        graph: MultiGraph,
        chain: ChainStructure,
        w0: AdmissibleMultidegree,
    ) -> "ConcentratedFamily":
        """The v-reduced (concentrated, nonnegative-away) member at every vertex."""
        return cls(
            graph,
            chain,
            {v: concentrate(graph, chain, w0, v)[0] for v in graph.vertex_ids},
        )

    def member(self, v: str) -> AdmissibleMultidegree:
        self.graph.check_vertex(v)
        return self.members[v]

    def has_nonnegative_member(self) -> bool:
        g = self.graph
        return any(
            all(w.w(v) >= 0 for v in g.vertex_ids) for w in self.members.values()
        )


def in_twist_core(
    family: ConcentratedFamily, w: AdmissibleMultidegree
) -> bool:
    """Membership: no minimal path from w to a concentrated member twists at
    that member's vertex."""
    for v in family.graph.vertex_ids:
        t = minimal_path(family.graph, family.chain, w, family.member(v))
        if t[v] != 0:
            return False
    return True


class TwistCore:
    """The enumerated finite core together with its reference family."""

    def __init__(
        self,
        family: ConcentratedFamily,
        base: AdmissibleMultidegree,
        members: Iterable[AdmissibleMultidegree],
    ):
        self.family = family
        self.base = base
        self.members = tuple(
            sorted(
                members,
                key=lambda w: (
                    tuple(sorted(w.vertex_part().items())),
                    tuple(sorted(w.chain_part().items())),
                ),
            )
        )

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __contains__(self, w: AdmissibleMultidegree) -> bool:
        return w in set(self.members)

    def twist_edges(self) -> Tuple[Tuple[int, int, str], ...]:
        """Single-vertex twists between members, as (from, to, vertex) index
        triples in the canonical member order."""
        graph, chain = self.family.graph, self.family.chain
        index = {w: i for i, w in enumerate(self.members)}
        out = []
        for i, w in enumerate(self.members):
            for v in graph.vertex_ids:
                moved = twist(graph, chain, w, v)
                j = index.get(moved)
                if j is not None:
                    out.append((i, j, v))
        return tuple(out)

    def is_connected_under_single_twists(self) -> bool:
        """Observed connectivity of the core under single-vertex twists;
        recorded as data, never assumed."""
        if not self.members:
            return True
        adjacency: Dict[int, set] = {i: set() for i in range(len(self.members))}
        for i, j, _ in self.twist_edges():
            adjacency[i].add(j)
            adjacency[j].add(i)
        seen = {0}
        stack = [0]
        while stack:
            x = stack.pop()
            for y in adjacency[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return len(seen) == len(self.members)

    def to_dot(self) -> str:
        """DOT digraph of the core: nodes are multidegrees, arrows are
        single-vertex twists, labeled by the twisted vertex."""
        lines = ["digraph twist_core {"]
        for i, w in enumerate(self.members):
            vertex_part = ",".join(
                f"{v}:{c}" for v, c in sorted(w.vertex_part().items())
            )
            chain_part = ",".join(
                f"{e}:{m}" for e, m in sorted(w.chain_part().items()) if m
            )
            label = vertex_part + (f" | {chain_part}" if chain_part else "")
            lines.append(f'  n{i} [label="{label}"];')
        for i, j, v in self.twist_edges():
            lines.append(f'  n{i} -> n{j} [label="{v}"];')
        lines.append("}")
        return "\n".join(lines)


def enumerate_twist_core(
    graph: MultiGraph,
    chain: ChainStructure,
    w0: AdmissibleMultidegree,
    family: Optional[ConcentratedFamily] = None,
) -> TwistCore:
    """Exhaustively enumerate the twist core over its bounding box.

    Vertex degrees of members are bounded above by the concentrated member's
    degree at the same vertex, and below by total degree bookkeeping; chain
    positions range over their full cyclic groups.
    """
    if family is None:
        family = ConcentratedFamily.canonical(graph, chain, w0)
    if not family.has_nonnegative_member():
        raise NoNonnegativeTwist(
            "no everywhere-nonnegative twist exists; the core may be empty"
        )
    d = w0.degree
    vs = list(graph.vertex_ids)
    es = list(graph.edge_ids)
    hi = {v: family.member(v).w(v) for v in vs}
    lo_base = d - len(es) - sum(hi.values())
    lo = {v: lo_base + hi[v] for v in vs}

    sub = subdivide(graph, chain)
    q = sub.graph.base_vertex()
    target, _ = reduce_divisor(sub.graph, induced_divisor(sub, w0), q)

    members: List[AdmissibleMultidegree] = []
    vertex_ranges = [range(lo[v], hi[v] + 1) for v in vs]
    chain_ranges = [range(chain[e]) for e in es]
    for w_part in itertools.product(*vertex_ranges):
        partial = sum(w_part)
        for mu_part in itertools.product(*chain_ranges):
            degree = partial + sum(1 for m in mu_part if m)
            if degree != d:
                continue
            cand = AdmissibleMultidegree(
                graph, chain, dict(zip(vs, w_part)), dict(zip(es, mu_part))
            )
            reduced, _ = reduce_divisor(sub.graph, induced_divisor(sub, cand), q)
            if reduced != target:
                continue
            if in_twist_core(family, cand):
                members.append(cand)
    return TwistCore(family, w0, members)


def node_divisor_along(
    graph: MultiGraph,
    chain: ChainStructure,
    w: AdmissibleMultidegree,
    path: Iterable[str],
    v: str,
) -> NodeDivisor:
    """Accumulate node points on the component at v along a twist path.

    A twist at a neighbor contributes the node points of the connecting edges
    whose chain position lands on 0; a twist at v itself removes the node
    points of the incident edges whose position was 0.
    """
    out: Dict[NodePoint, int] = {}
    current = w
    for x in path:
        before = current
        current = twist(graph, chain, current, x)
        if x == v:
            for e in graph.incident_edges(v):
                if before.mu(e) == 0:
                    p = NodePoint(v, e)
                    out[p] = out.get(p, 0) - 1
        else:
            joining = graph.edges_between(x, v)
            for e in joining:
                if current.mu(e) == 0:
                    p = NodePoint(v, e)
                    out[p] = out.get(p, 0) + 1
    return NodeDivisor(out)


def node_divisor(
    graph: MultiGraph,
    chain: ChainStructure,
    family: ConcentratedFamily,
    w: AdmissibleMultidegree,
    v: str,
) -> NodeDivisor:
    """The node-point divisor on the component at v recording the vanishing
    imposed in moving from w to the member concentrated at v.

    Evaluated along the canonical sorted path; the result is independent of
    the choice of path, which is asserted against the reversed ordering.
    """
    graph.check_vertex(v)
    t = minimal_path(graph, chain, w, family.member(v))
    path: List[str] = []
    for u in graph.vertex_ids:
        path.extend([u] * t[u])
    forward = node_divisor_along(graph, chain, w, path, v)
    backward = node_divisor_along(graph, chain, w, list(reversed(path)), v)
    if forward != backward:
        raise InternalInvariantError("node divisor depends on the path ordering")
    end = apply_twists(graph, chain, w, t)
    if end != family.member(v):
        raise InternalInvariantError("minimal path does not reach the member")
    return forward


def chain_point_divisor(
    mg: MetricGraph, w: AdmissibleMultidegree
) -> MetricDivisor:
    """One point per edge with nonzero chain position, at that distance from
    the tail, on the metric graph whose edge lengths are the chain counts."""
    coeffs: Dict = {}
    for e in mg.model.edge_ids:
        m = w.mu(e)
        if m != 0:
            p = mg.point(e, m)
            coeffs[p] = coeffs.get(p, 0) + 1
    return MetricDivisor(coeffs)


def metric_graph_of_chain(graph: MultiGraph, chain: ChainStructure) -> MetricGraph:
    """The metric graph with edge lengths given by the chain counts."""
    return MetricGraph(graph, {e: chain[e] for e in graph.edge_ids})


def dimension_bound_twist(
    graph: MultiGraph,
    chain: ChainStructure,
    w0: AdmissibleMultidegree,
    v0: str,
) -> Tuple[AdmissibleMultidegree, int]:
    """A twist of w0 whose section space obeys the bound max(d+1-g, g).

    Reduces (canonical - induced w0) at v0 on the subdivision, then repairs
    each chain carrying a unit so that the complement of the result is again
    of chain shape: the unit at position j is traded for +1 at both endpoints
    and -1 at position n(e) - j.  Returns the admissible complement and the
    bound.
    """
    graph.check_vertex(v0)
    sub = subdivide(graph, chain)
    w_can = canonical_divisor(sub.graph)
    w0_tilde = induced_divisor(sub, w0)
    reduced, _ = reduce_divisor(sub.graph, w_can - w0_tilde, v0)

    fixed = reduced.coeffs()
    for e in graph.edge_ids:
        inner = sub.chain_vertices(e)
        unit_at = [i for i, x in enumerate(inner, start=1) if reduced[x] == 1]
        if not unit_at:
            continue
        (j,) = unit_at
        n_e = chain[e]
        tail, head = graph.ends(e)
        fixed[tail] = fixed.get(tail, 0) + 1
        fixed[head] = fixed.get(head, 0) + 1
        fixed[inner[j - 1]] = fixed.get(inner[j - 1], 0) - 1
        fixed[inner[n_e - j - 1]] = fixed.get(inner[n_e - j - 1], 0) - 1
    repaired = Divisor(fixed)

    result = admissible_from_divisor(sub, w_can - repaired)
    if result is None:
        raise InternalInvariantError("repaired complement is not of chain shape")
    if twist_equivalent(graph, chain, w0, result) is None:
        raise InternalInvariantError("dimension-bound twist left the twist class")
    if not _divisor_concentrated(sub.graph, repaired, v0):
        raise InternalInvariantError("repaired divisor lost concentration")
    d = w0.degree
    g = sub.graph.genus()
    return result, max(d + 1 - g, g)


def _divisor_concentrated(graph: MultiGraph, divisor: Divisor, v0: str) -> bool:
    plain = ChainStructure(graph)
    adm = AdmissibleMultidegree(graph, plain, divisor.coeffs())
    return is_concentrated(graph, plain, adm, v0)[0]
