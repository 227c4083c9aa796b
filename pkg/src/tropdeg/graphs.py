"""Finite multigraphs, divisors, chip-firing, reduced divisors, and rank.

Vertices carry optional genus weights that only enter the canonical divisor
and the total genus; all chip-firing dynamics ignore them.  Everything here
is exact integer arithmetic and every operation is a pure function.
"""

from __future__ import annotations

import itertools
from typing import Dict, Iterable, Mapping, Optional, Sequence, Tuple

from .errors import (
    Disconnected,
    DuplicateId,
    InternalInvariantError,
    LoopRejected,
    UnknownVertex,
)


class MultiGraph:
    """Loopless connected multigraph with oriented edges.

    Orientation is part of the data: an edge has a tail and a head, and
    sigma(e, v) is +1 if v is the tail of e and -1 if v is the head.
    Parallel edges are permitted; loops are not.
    """

    def __init__(
        self,
        vertices: Iterable[Tuple[str, int]],
        edges: Iterable[Tuple[str, str, str]],
    ):
        self._genus: Dict[str, int] = {}
        for vid, genus in vertices:
            if vid in self._genus:
                raise DuplicateId(f"duplicate vertex id {vid!r}")
            if genus < 0:
                raise ValueError(f"vertex {vid!r} has negative genus")
            self._genus[vid] = int(genus)
        self._ends: Dict[str, Tuple[str, str]] = {}
        self._incident: Dict[str, list] = {v: [] for v in self._genus}
        for eid, tail, head in edges:
            if eid in self._ends:
                raise DuplicateId(f"duplicate edge id {eid!r}")
            if tail not in self._genus or head not in self._genus:
                raise UnknownVertex(f"edge {eid!r} touches an unknown vertex")
            if tail == head:
                raise LoopRejected(f"edge {eid!r} is a loop at {tail!r}")
            self._ends[eid] = (tail, head)
            self._incident[tail].append(eid)
            self._incident[head].append(eid)
        if not self._genus:
            raise Disconnected("graph has no vertices")
        self._check_connected()
        self._vertex_order = tuple(sorted(self._genus))
        self._edge_order = tuple(sorted(self._ends))

    def _check_connected(self) -> None:
        start = next(iter(self._genus))
        seen = {start}
        stack = [start]
        while stack:
            v = stack.pop()
            for e in self._incident[v]:
                for u in self._ends[e]:
                    if u not in seen:
                        seen.add(u)
                        stack.append(u)
        if len(seen) != len(self._genus):
            missing = sorted(set(self._genus) - seen)
            raise Disconnected(f"vertices unreachable from {start!r}: {missing}")

    # -- basic queries -------------------------------------------------

    @property
    def vertex_ids(self) -> Tuple[str, ...]:
        return self._vertex_order

    @property
    def edge_ids(self) -> Tuple[str, ...]:
        return self._edge_order

    def has_vertex(self, v: str) -> bool:
        return v in self._genus

    def check_vertex(self, v: str) -> None:
        if v not in self._genus:
            raise UnknownVertex(f"unknown vertex {v!r}")

    def check_divisor(self, divisor: "Divisor") -> None:
        stray = [v for v in divisor.support() if v not in self._genus]
        if stray:
            raise UnknownVertex(f"divisor supported on unknown vertices: {stray}")

    def vertex_genus(self, v: str) -> int:
        self.check_vertex(v)
        return self._genus[v]

    def ends(self, e: str) -> Tuple[str, str]:
        """(tail, head) of the oriented edge e."""
        return self._ends[e]

    def tail(self, e: str) -> str:
        return self._ends[e][0]

    def head(self, e: str) -> str:
        return self._ends[e][1]

    def sigma(self, e: str, v: str) -> int:
        tail, head = self._ends[e]
        if v == tail:
            return 1
        if v == head:
            return -1
        raise UnknownVertex(f"vertex {v!r} is not an endpoint of edge {e!r}")

    def other_end(self, e: str, v: str) -> str:
        tail, head = self._ends[e]
        if v == tail:
            return head
        if v == head:
            return tail
        raise UnknownVertex(f"vertex {v!r} is not an endpoint of edge {e!r}")

    def incident_edges(self, v: str) -> Tuple[str, ...]:
        self.check_vertex(v)
        return tuple(sorted(self._incident[v]))

    def valence(self, v: str) -> int:
        self.check_vertex(v)
        return len(self._incident[v])

    def neighbors(self, v: str) -> Tuple[str, ...]:
        return tuple(sorted({self.other_end(e, v) for e in self._incident[v]}))

    def edges_between(self, u: str, v: str) -> Tuple[str, ...]:
        """All (parallel) edges joining u and v, either orientation."""
        return tuple(
            sorted(e for e in self._incident.get(u, ()) if v in self._ends[e])
        )

    def first_betti(self) -> int:
        return len(self._ends) - len(self._genus) + 1

    def genus(self) -> int:
        """Arithmetic genus: sum of vertex genera plus the first Betti number."""
        return sum(self._genus.values()) + self.first_betti()

    def base_vertex(self) -> str:
        """Canonical basepoint: the lexicographically least vertex id."""
        return self._vertex_order[0]

    def bfs_distances(self, v0: str) -> Dict[str, int]:
        self.check_vertex(v0)
        dist = {v0: 0}
        frontier = [v0]
        while frontier:
            nxt = []
            for v in frontier:
                for e in self._incident[v]:
                    u = self.other_end(e, v)
                    if u not in dist:
                        dist[u] = dist[v] + 1
                        nxt.append(u)
            frontier = nxt
        return dist

    def __repr__(self) -> str:
        return (
            f"MultiGraph({len(self._genus)} vertices, {len(self._ends)} edges, "
            f"genus {self.genus()})"
        )


def build_graph(
    vertices: Sequence, edges: Sequence[Tuple[str, str, str]]
) -> MultiGraph:
    """Validate vertex/edge lists and return a MultiGraph.

    Vertices may be given as bare ids (genus 0) or (id, genus) pairs.
    """
    vs = []
    for item in vertices:
        if isinstance(item, str):
            vs.append((item, 0))
        else:
            vid, genus = item
            vs.append((vid, int(genus)))
    return MultiGraph(vs, edges)


class Divisor:
    """Integer vertex weighting with finite support; zero off the support."""

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: Optional[Mapping[str, int]] = None):
        self._coeffs = {v: int(c) for v, c in (coeffs or {}).items() if c != 0}

    def __getitem__(self, v: str) -> int:
        return self._coeffs.get(v, 0)

    def coeffs(self) -> Dict[str, int]:
        return dict(self._coeffs)

    @property
    def degree(self) -> int:
        return sum(self._coeffs.values())

    def support(self) -> Tuple[str, ...]:
        return tuple(sorted(self._coeffs))

    def is_effective(self) -> bool:
        return all(c >= 0 for c in self._coeffs.values())

    def __add__(self, other: "Divisor") -> "Divisor":
        out = dict(self._coeffs)
        for v, c in other._coeffs.items():
            out[v] = out.get(v, 0) + c
        return Divisor(out)

    def __sub__(self, other: "Divisor") -> "Divisor":
        out = dict(self._coeffs)
        for v, c in other._coeffs.items():
            out[v] = out.get(v, 0) - c
        return Divisor(out)

    def __neg__(self) -> "Divisor":
        return Divisor({v: -c for v, c in self._coeffs.items()})

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Divisor) and self._coeffs == other._coeffs

    def __hash__(self) -> int:
        return hash(frozenset(self._coeffs.items()))

    def __repr__(self) -> str:
        inner = ", ".join(f"{v}: {c}" for v, c in sorted(self._coeffs.items()))
        return f"Divisor({{{inner}}})"


class TwistVector:
    """Multiset of per-vertex firing counts.

    Normal form has minimum entry 0 over all vertices of the ambient graph;
    two firing multisets reach the same endpoint exactly when they differ by
    a constant vector.
    """

    __slots__ = ("_counts",)

    def __init__(self, counts: Optional[Mapping[str, int]] = None):
        self._counts = {v: int(c) for v, c in (counts or {}).items() if c != 0}

    def __getitem__(self, v: str) -> int:
        return self._counts.get(v, 0)

    def counts(self) -> Dict[str, int]:
        return dict(self._counts)

    def is_zero(self) -> bool:
        return not self._counts

    def normal_form(self, graph: MultiGraph) -> "TwistVector":
        m = min(self._counts.get(v, 0) for v in graph.vertex_ids)
        if m == 0:
            return TwistVector(self._counts)
        return TwistVector({v: self._counts.get(v, 0) - m for v in graph.vertex_ids})

    def __add__(self, other: "TwistVector") -> "TwistVector":
        out = dict(self._counts)
        for v, c in other._counts.items():
            out[v] = out.get(v, 0) + c
        return TwistVector(out)

    def __sub__(self, other: "TwistVector") -> "TwistVector":
        out = dict(self._counts)
        for v, c in other._counts.items():
            out[v] = out.get(v, 0) - c
        return TwistVector(out)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, TwistVector) and self._counts == other._counts

    def __hash__(self) -> int:
        return hash(frozenset(self._counts.items()))

    def __repr__(self) -> str:
        inner = ", ".join(f"{v}: {c}" for v, c in sorted(self._counts.items()))
        return f"TwistVector({{{inner}}})"


def fire(graph: MultiGraph, divisor: Divisor, v: str) -> Divisor:
    """Fire v once: v loses its valence, each neighbor gains one chip per joining edge."""
    graph.check_vertex(v)
    graph.check_divisor(divisor)
    out = divisor.coeffs()
    for e in graph.incident_edges(v):
        u = graph.other_end(e, v)
        out[v] = out.get(v, 0) - 1
        out[u] = out.get(u, 0) + 1
    return Divisor(out)


def apply_firings(graph: MultiGraph, divisor: Divisor, counts: TwistVector) -> Divisor:
    """Fire each vertex the given (possibly negative) number of times."""
    out = divisor.coeffs()
    for e in graph.edge_ids:
        tail, head = graph.ends(e)
        flow = counts[tail] - counts[head]
        if flow:
            out[tail] = out.get(tail, 0) - flow
            out[head] = out.get(head, 0) + flow
    return Divisor(out)


def _burn(graph: MultiGraph, divisor: Divisor, v0: str) -> Tuple[str, ...]:
    """Dhar burning from v0; returns the vertices that survive (possibly empty).

    A vertex burns when its chip count is strictly smaller than the number of
    edges joining it to already-burnt territory.  Deletion order is ascending
    vertex id; the surviving set is order-independent.
    """
    burnt = {v0}
    changed = True
    while changed:
        changed = False
        for v in graph.vertex_ids:
            if v in burnt:
                continue
            toward = sum(
                1 for e in graph.incident_edges(v) if graph.other_end(e, v) in burnt
            )
            if divisor[v] < toward:
                burnt.add(v)
                changed = True
    return tuple(v for v in graph.vertex_ids if v not in burnt)


def is_v_reduced(graph: MultiGraph, divisor: Divisor, v0: str) -> bool:
    """True iff divisor is nonnegative away from v0 and no subset survives burning."""
    graph.check_vertex(v0)
    graph.check_divisor(divisor)
    if any(divisor[v] < 0 for v in graph.vertex_ids if v != v0):
        return False
    return not _burn(graph, divisor, v0)


def reduce_divisor(
    graph: MultiGraph, divisor: Divisor, v0: str
) -> Tuple[Divisor, TwistVector]:
    """The unique v0-reduced divisor equivalent to the input, plus the firing witness.

    Phase 1 clears negative chips away from v0 by firing breadth-first balls
    around v0, farthest layers first; phase 2 repeatedly fires the set left
    unburnt by Dhar burning.  The returned twist vector is in normal form and
    satisfies apply_firings(graph, divisor, t) == reduced.
    """
    graph.check_vertex(v0)
    graph.check_divisor(divisor)
    dist = graph.bfs_distances(v0)
    fired = {v: 0 for v in graph.vertex_ids}
    current = divisor

    radius = max(dist.values())
    for k in range(radius, 0, -1):
        layer = [v for v in graph.vertex_ids if dist[v] == k]
        deficit = 0
        for v in layer:
            if current[v] < 0:
                inward = sum(
                    1
                    for e in graph.incident_edges(v)
                    if dist[graph.other_end(e, v)] == k - 1
                )
                need = (-current[v] + inward - 1) // inward
                deficit = max(deficit, need)
        if deficit:
            ball = TwistVector(
                {v: deficit for v in graph.vertex_ids if dist[v] <= k - 1}
            )
            current = apply_firings(graph, current, ball)
            for v in graph.vertex_ids:
                if dist[v] <= k - 1:
                    fired[v] += deficit

    while True:
        survivors = _burn(graph, current, v0)
        if not survivors:
            break
        step = TwistVector({v: 1 for v in survivors})
        current = apply_firings(graph, current, step)
        for v in survivors:
            fired[v] += 1

    witness = TwistVector(fired).normal_form(graph)
    if apply_firings(graph, divisor, witness) != current:
        raise InternalInvariantError("reduce witness does not reproduce the result")
    return current, witness


def canonical_divisor(graph: MultiGraph) -> Divisor:
    """Coefficient 2*genus(v) - 2 + valence(v) at each vertex; degree 2g - 2."""
    return Divisor(
        {
            v: 2 * graph.vertex_genus(v) - 2 + graph.valence(v)
            for v in graph.vertex_ids
        }
    )


def linear_equiv(
    graph: MultiGraph, a: Divisor, b: Divisor
) -> Optional[TwistVector]:
    """Normal-form firing vector taking a to b, or None if inequivalent.

    Divisors are equivalent exactly when their reduced forms at the canonical
    basepoint agree.
    """
    if a.degree != b.degree:
        return None
    q = graph.base_vertex()
    ra, ta = reduce_divisor(graph, a, q)
    rb, tb = reduce_divisor(graph, b, q)
    if ra != rb:
        return None
    witness = (ta - tb).normal_form(graph)
    if apply_firings(graph, a, witness) != b:
        raise InternalInvariantError("equivalence witness failed to replay")
    return witness


def has_effective_representative(graph: MultiGraph, divisor: Divisor) -> bool:
    if divisor.degree < 0:
        return False
    q = graph.base_vertex()
    reduced, _ = reduce_divisor(graph, divisor, q)
    return reduced[q] >= 0


def effective_divisors(graph: MultiGraph, degree: int) -> Iterable[Divisor]:
    """All effective divisors of the given degree supported on the vertices."""
    if degree < 0:
        return
    for combo in itertools.combinations_with_replacement(graph.vertex_ids, degree):
        out: Dict[str, int] = {}
        for v in combo:
            out[v] = out.get(v, 0) + 1
        yield Divisor(out)


def rank_at_least(graph: MultiGraph, divisor: Divisor, r: int) -> bool:
    """Whether the rank is at least r, without computing it exactly."""
    graph.check_divisor(divisor)
    if r < 0:
        return True
    if divisor.degree < r:
        return False
    q = graph.base_vertex()
    reduced, _ = reduce_divisor(graph, divisor, q)
    if reduced[q] < 0:
        return False
    for e in effective_divisors(graph, r):
        probe, _ = reduce_divisor(graph, reduced - e, q)
        if probe[q] < 0:
            return False
    return True


def rank(graph: MultiGraph, divisor: Divisor, basepoint: Optional[str] = None) -> int:
    """Baker-Norine rank: the largest r such that D - E stays effective up to
    equivalence for every effective E of degree r; -1 if D itself fails.

    The basepoint only anchors the reduction used for effectivity tests; the
    result does not depend on it.
    """
    graph.check_divisor(divisor)
    if divisor.degree < 0:
        return -1
    q = basepoint if basepoint is not None else graph.base_vertex()
    graph.check_vertex(q)
    reduced, _ = reduce_divisor(graph, divisor, q)
    if reduced[q] < 0:
        return -1
    r = 0
    while True:
        if r + 1 > divisor.degree:
            return r
        for e in effective_divisors(graph, r + 1):
            probe, _ = reduce_divisor(graph, reduced - e, q)
            if probe[q] < 0:
                return r
        r += 1
