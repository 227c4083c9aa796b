"""Chain structures, subdivided graphs, admissible multidegrees, and twists.

A chain structure assigns each edge a positive segment count n(e); the
subdivided graph replaces each edge by a path of n(e) edges.  An admissible
multidegree carries integer degrees on the original vertices plus, per edge,
the position mod n(e) of a single unit of degree on the inserted chain
(position 0 meaning no unit).  Twisting at a vertex advances those positions
and is chip-firing when every n(e) is 1.
"""

from __future__ import annotations

from typing import Dict, List, Mapping, Optional, Tuple

from .errors import InternalInvariantError, InvalidChain, UnknownEdge, UnknownVertex
from .graphs import Divisor, MultiGraph, TwistVector, linear_equiv, reduce_divisor


class ChainStructure:
    """Positive segment count per edge of the base graph."""

    __slots__ = ("_n",)

    def __init__(self, graph: MultiGraph, n: Optional[Mapping[str, int]] = None):
        n = dict(n or {})
        unknown = sorted(set(n) - set(graph.edge_ids))
        if unknown:
            raise InvalidChain(f"chain counts for unknown edges: {unknown}")
        self._n = {}
        for e in graph.edge_ids:
            count = int(n.get(e, 1))
            if count < 1:
                raise InvalidChain(f"chain count for edge {e!r} must be >= 1")
            self._n[e] = count

    def __getitem__(self, e: str) -> int:
        return self._n[e]

    def counts(self) -> Dict[str, int]:
        return dict(self._n)

    def is_trivial(self) -> bool:
        return all(c == 1 for c in self._n.values())

    def __eq__(self, other: object) -> bool:
        return isinstance(other, ChainStructure) and self._n == other._n

    def __repr__(self) -> str:
        return f"ChainStructure({self._n})"


def new_vertex_id(e: str, i: int) -> str:
    """Id of the i-th inserted vertex over edge e (1-based, ordered from the tail)."""
    return f"{e}@{i}"


class SubdividedGraph:
    """The graph obtained by cutting each edge e into n(e) segments.

    Original vertices keep their ids and genera; inserted vertices are named
    ``e@i`` and have genus 0 and valence 2.  Segment k of edge e is named
    ``e#k`` and runs in the direction of e.
    """

    def __init__(self, base: MultiGraph, chain: ChainStructure):
        self.base = base
        self.chain = chain
        vertices: List[Tuple[str, int]] = [
            (v, base.vertex_genus(v)) for v in base.vertex_ids
        ]
        edges: List[Tuple[str, str, str]] = []
        self._chain_vertices: Dict[str, Tuple[str, ...]] = {}
        for e in base.edge_ids:
            tail, head = base.ends(e)
            count = chain[e]
            inner = tuple(new_vertex_id(e, i) for i in range(1, count))
            self._chain_vertices[e] = inner
            vertices.extend((x, 0) for x in inner)
            stops = [tail, *inner, head]
            for k in range(count):
                edges.append((f"{e}#{k + 1}", stops[k], stops[k + 1]))
        self.graph = MultiGraph(vertices, edges)

    def chain_vertices(self, e: str) -> Tuple[str, ...]:
        """Inserted vertices over e, ordered from the tail of e."""
        return self._chain_vertices[e]

    def is_original(self, v: str) -> bool:
        return self.base.has_vertex(v)

    def parent_edge(self, v: str) -> Tuple[str, int]:
        """(edge, index) for an inserted vertex; index is 1-based from the tail."""
        e, _, i = v.rpartition("@")
        return e, int(i)


def subdivide(base: MultiGraph, chain: ChainStructure) -> SubdividedGraph:
    return SubdividedGraph(base, chain)


class AdmissibleMultidegree:
    """Degrees on original vertices plus a chain position mod n(e) per edge.

    The total degree is the number of edges with nonzero position plus the
    sum of the vertex degrees.
    """

    __slots__ = ("_w", "_mu", "_degree")

    def __init__(
        self,
        graph: MultiGraph,
        chain: ChainStructure,
        w: Mapping[str, int],
        mu: Optional[Mapping[str, int]] = None,
    ):
        unknown = sorted(set(w) - set(graph.vertex_ids))
        if unknown:
            raise UnknownVertex(f"degrees on unknown vertices: {unknown}")
        self._w = {v: int(w.get(v, 0)) for v in graph.vertex_ids}
        mu = dict(mu or {})
        stray = sorted(set(mu) - set(graph.edge_ids))
        if stray:
            raise UnknownEdge(f"chain positions on unknown edges: {stray}")
        self._mu = {}
        for e in graph.edge_ids:
            self._mu[e] = int(mu.get(e, 0)) % chain[e]
        self._degree = sum(self._w.values()) + sum(
            1 for m in self._mu.values() if m != 0
        )

    @property
    def degree(self) -> int:
        return self._degree

    def w(self, v: str) -> int:
        return self._w[v]

    def mu(self, e: str) -> int:
        return self._mu[e]

    def vertex_part(self) -> Dict[str, int]:
        return dict(self._w)

    def chain_part(self) -> Dict[str, int]:
        return dict(self._mu)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, AdmissibleMultidegree)
            and self._w == other._w
            and self._mu == other._mu
        )

    def __hash__(self) -> int:
        return hash(
            (frozenset(self._w.items()), frozenset(self._mu.items()))
        )

    def __repr__(self) -> str:
        w = {v: c for v, c in sorted(self._w.items()) if c}
        mu = {e: m for e, m in sorted(self._mu.items()) if m}
        return f"AdmissibleMultidegree(w={w}, mu={mu}, d={self._degree})"


def induced_divisor(
    sub: SubdividedGraph, adm: AdmissibleMultidegree
) -> Divisor:
    """The divisor on the subdivided graph induced by an admissible multidegree.

    Original vertices keep their degrees; the mu(e)-th inserted vertex over
    each edge with mu(e) != 0 receives one unit, counted from the tail.
    """
    out: Dict[str, int] = {}
    for v in sub.base.vertex_ids:
        out[v] = adm.w(v)
    for e in sub.base.edge_ids:
        m = adm.mu(e)
        if m != 0:
            out[sub.chain_vertices(e)[m - 1]] = 1
    return Divisor(out)


def admissible_from_divisor(
    sub: SubdividedGraph, divisor: Divisor
) -> Optional[AdmissibleMultidegree]:
    """Invert induced_divisor, or None when the divisor is not of chain shape.

    Chain shape means every inserted vertex carries 0 or 1, with at most one
    1 per chain.
    """
    mu: Dict[str, int] = {}
    for e in sub.base.edge_ids:
        ones = []
        for i, x in enumerate(sub.chain_vertices(e), start=1):
            c = divisor[x]
            if c == 0:
                continue
            if c != 1:
                return None
            ones.append(i)
        if len(ones) > 1:
            return None
        mu[e] = ones[0] if ones else 0
    w = {v: divisor[v] for v in sub.base.vertex_ids}
    return AdmissibleMultidegree(sub.base, sub.chain, w, mu)


def twist(
    graph: MultiGraph,
    chain: ChainStructure,
    adm: AdmissibleMultidegree,
    v: str,
    direction: int = 1,
) -> AdmissibleMultidegree:
    """Twist at v: advance mu(e) by sigma(e, v) on incident edges, moving one
    unit of degree out of v per edge whose position was 0 and into the far
    endpoint per edge whose position becomes 0.  direction=-1 is the inverse.
    """
    graph.check_vertex(v)
    if direction not in (1, -1):
        raise ValueError("direction must be +1 or -1")
    w = adm.vertex_part()
    mu = adm.chain_part()
    for e in graph.incident_edges(v):
        old = mu[e]
        new = (old + direction * graph.sigma(e, v)) % chain[e]
        mu[e] = new
        other = graph.other_end(e, v)
        if direction == 1:
            if old == 0:
                w[v] -= 1
            if new == 0:
                w[other] += 1
        else:
            if new == 0:
                w[v] += 1
            if old == 0:
                w[other] -= 1
    out = AdmissibleMultidegree(graph, chain, w, mu)
    if out.degree != adm.degree:
        raise InternalInvariantError("twist changed the total degree")
    return out


def apply_twists(
    graph: MultiGraph,
    chain: ChainStructure,
    adm: AdmissibleMultidegree,
    counts: TwistVector,
) -> AdmissibleMultidegree:
    """Twist counts[v] times at each vertex (negative counts allowed)."""
    out = adm
    for v in graph.vertex_ids:
        c = counts[v]
        step = 1 if c > 0 else -1
        for _ in range(abs(c)):
            out = twist(graph, chain, out, v, step)
    return out


def is_concentrated(
    graph: MultiGraph,
    chain: ChainStructure,
    adm: AdmissibleMultidegree,
    v0: str,
) -> Tuple[bool, Tuple[str, ...]]:
    """Whether some ordering starting at v0 makes each later vertex negative
    under the composed negative twists at the earlier ones.

    Returns the witness ordering on success, the maximal failing prefix
    otherwise.  The greedy construction is complete: any vertex currently
    negative may be chosen, so candidates are consumed in ascending id order.
    """
    graph.check_vertex(v0)
    order = [v0]
    remaining = [v for v in graph.vertex_ids if v != v0]
    current = twist(graph, chain, adm, v0, -1)
    while remaining:
        pick = None
        for v in remaining:
            if current.w(v) < 0:
                pick = v
                break
        if pick is None:
            return False, tuple(order)
        remaining.remove(pick)
        order.append(pick)
        current = twist(graph, chain, current, pick, -1)
    return True, tuple(order)


def twist_equivalent(
    graph: MultiGraph,
    chain: ChainStructure,
    a: AdmissibleMultidegree,
    b: AdmissibleMultidegree,
) -> Optional[TwistVector]:
    """Normal-form twist vector on the base vertices taking a to b, or None.

    Two admissible multidegrees are related by twists exactly when their
    induced divisors on the subdivision are linearly equivalent, and the base
    restriction of the subdivision firing vector realizes the twists.
    """
    sub = subdivide(graph, chain)
    t_full = linear_equiv(sub.graph, induced_divisor(sub, a), induced_divisor(sub, b))
    if t_full is None:
        return None
    t = TwistVector({v: t_full[v] for v in graph.vertex_ids}).normal_form(graph)
    if apply_twists(graph, chain, a, t) != b:
        raise InternalInvariantError(
            "restricted twist vector failed to replay on the base graph"
        )
    return t


def concentrate(
    graph: MultiGraph,
    chain: ChainStructure,
    adm: AdmissibleMultidegree,
    v0: str,
) -> Tuple[AdmissibleMultidegree, TwistVector]:
    """The unique twist of adm concentrated at v0 and nonnegative elsewhere.

    Computed by reducing the induced divisor on the subdivision at v0 (the
    reduced divisor is always of chain shape) and pulling back, with the base
    twist vector recovered from the subdivision firing vector.
    """
    graph.check_vertex(v0)
    sub = subdivide(graph, chain)
    reduced, t_full = reduce_divisor(sub.graph, induced_divisor(sub, adm), v0)
    out = admissible_from_divisor(sub, reduced)
    if out is None:
        raise InternalInvariantError("reduced divisor was not of chain shape")
    t = TwistVector({v: t_full[v] for v in graph.vertex_ids}).normal_form(graph)
    if apply_twists(graph, chain, adm, t) != out:
        raise InternalInvariantError("concentration twist vector failed to replay")
    return out, t
