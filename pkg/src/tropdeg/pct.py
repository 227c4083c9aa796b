"""Multitree machinery: edge-side twists, concentrated families with twist
counts, node-divisor sequences, multivanishing profiles, the inequality
checker, and the witness multidegree construction.

A multitree is a graph whose simple collapse (one edge per adjacent pair) is
a tree.  On a multitree, twisting every vertex on one side of a collapsed
edge is a well-defined move that only touches the parallel edges over it.
"""

from __future__ import annotations

from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .chains import AdmissibleMultidegree, ChainStructure, is_concentrated
from .errors import (
    ConditionIIViolated,
    InconsistentProfile,
    InternalInvariantError,
    InvalidFiltration,
    NotMultitree,
    ProfileViolatesI,
    UnknownVertex,
)
from .graphs import MultiGraph, TwistVector
from .twistgraph import (
    ConcentratedFamily,
    NodeDivisor,
    in_twist_core,
    minimal_path,
    node_divisor,
)

BarEdge = Tuple[str, str]  # sorted vertex pair of the simple collapse
Side = Tuple[BarEdge, str]  # a collapsed edge plus one of its endpoints


class MultitreeData:
    """Simple collapse of a multigraph plus its tree certificate."""

    def __init__(self, graph: MultiGraph):
        self.graph = graph
        pairs = set()
        for e in graph.edge_ids:
            tail, head = graph.ends(e)
            pairs.add(tuple(sorted((tail, head))))
        self.bar_edges: Tuple[BarEdge, ...] = tuple(sorted(pairs))
        n_vertices = len(graph.vertex_ids)
        self.is_multitree = len(self.bar_edges) == n_vertices - 1
        self.failing_cycle: Tuple[str, ...] = ()
        if not self.is_multitree:
            self.failing_cycle = self._find_cycle()

    def _find_cycle(self) -> Tuple[str, ...]:
        adjacency: Dict[str, List[str]] = {v: [] for v in self.graph.vertex_ids}
        for a, b in self.bar_edges:
            adjacency[a].append(b)
            adjacency[b].append(a)
        parent: Dict[str, Optional[str]] = {}
        start = self.graph.base_vertex()
        parent[start] = None
        stack = [start]
        while stack:
            v = stack.pop()
            for u in sorted(adjacency[v]):
                if u not in parent:
                    parent[u] = v
                    stack.append(u)
                elif parent[v] != u:
                    # walk both branches up to the common ancestor
                    left = [v]
                    while left[-1] is not None and parent[left[-1]] is not None:
                        left.append(parent[left[-1]])
                    lineage = {x: i for i, x in enumerate(left)}
                    walk = [u]
                    while walk[-1] not in lineage:
                        walk.append(parent[walk[-1]])
                    join = walk[-1]
                    return tuple(left[: lineage[join] + 1] + walk[:-1][::-1])
        raise InternalInvariantError("no cycle found in a non-tree collapse")

    def bar_neighbors(self, v: str) -> Tuple[str, ...]:
        return tuple(
            sorted(b if a == v else a for a, b in self.bar_edges if v in (a, b))
        )

    def side_vertices(self, edge: BarEdge, v: str) -> Tuple[str, ...]:
        """Vertices on v's side of the collapse with the given edge removed."""
        if v not in edge:
            raise UnknownVertex(f"{v!r} is not an endpoint of {edge}")
        blocked = set(edge)
        seen = {v}
        stack = [v]
        while stack:
            x = stack.pop()
            for u in self.bar_neighbors(x):
                if u in seen:
                    continue
                if x == v and {x, u} == blocked:
                    continue
                if {x, u} == blocked:
                    continue
                seen.add(u)
                stack.append(u)
        return tuple(sorted(seen))

    def sides(self) -> Tuple[Side, ...]:
        out = []
        for edge in self.bar_edges:
            for v in edge:
                out.append((edge, v))
        return tuple(out)


def is_multitree(graph: MultiGraph) -> MultitreeData:
    return MultitreeData(graph)


def _require_multitree(graph: MultiGraph) -> MultitreeData:
    data = MultitreeData(graph)
    if not data.is_multitree:
        raise NotMultitree(f"simple collapse has a cycle: {data.failing_cycle}")
    return data


def twist_edge_side(
    graph: MultiGraph,
    chain: ChainStructure,
    adm: AdmissibleMultidegree,
    edge: BarEdge,
    v: str,
    data: Optional[MultitreeData] = None,
) -> AdmissibleMultidegree:
    """Twist at every vertex on v's side of the collapsed edge.

    Implemented directly: only the parallel edges over the collapsed edge and
    its two endpoints change; positions advance toward the far side, degree
    leaves v per position that was 0 and reaches the far endpoint per position
    that becomes 0.
    """
    data = data or _require_multitree(graph)
    edge = tuple(sorted(edge))
    if edge not in data.bar_edges:
        raise UnknownVertex(f"{edge} is not an edge of the simple collapse")
    if v not in edge:
        raise UnknownVertex(f"{v!r} is not an endpoint of {edge}")
    other = edge[0] if edge[1] == v else edge[1]
    w = adm.vertex_part()
    mu = adm.chain_part()
    for e in graph.edges_between(v, other):
        old = mu[e]
        new = (old + graph.sigma(e, v)) % chain[e]
        mu[e] = new
        if old == 0:
            w[v] -= 1
        if new == 0:
            w[other] += 1
    return AdmissibleMultidegree(graph, chain, w, mu)


def edge_side_twist_vector(data: MultitreeData, edge: BarEdge, v: str) -> TwistVector:
    return TwistVector({u: 1 for u in data.side_vertices(tuple(sorted(edge)), v)})


class PctFamily:
    """Concentrated family on a multitree with edge-side twist counts."""

    def __init__(
        self,
        graph: MultiGraph,
        chain: ChainStructure,
        data: MultitreeData,
        family: ConcentratedFamily,
        counts: Mapping[Side, int],
    ):
        self.graph = graph
        self.chain = chain
        self.data = data
        self.family = family
        self.counts = dict(counts)

    def member(self, v: str) -> AdmissibleMultidegree:
        return self.family.member(v)

    def b(self, edge: BarEdge, v: str) -> int:
        return self.counts[(tuple(sorted(edge)), v)]


def pct_family(
    graph: MultiGraph,
    chain: ChainStructure,
    w0: AdmissibleMultidegree,
    check_restrictions: bool = True,
) -> PctFamily:
    """Concentrate w0 at every vertex and recover the edge-side twist counts.

    For each collapsed edge (v, v'), the member at v' must be reached from
    the member at v by twisting the whole v-side some b >= 0 times; anything
    else raises ConditionIIViolated (a bug, not a user error).
    """
    data = _require_multitree(graph)
    family = ConcentratedFamily.canonical(graph, chain, w0)
    counts: Dict[Side, int] = {}
    for edge in data.bar_edges:
        a, b_vertex = edge
        for v, other in ((a, b_vertex), (b_vertex, a)):
            t = minimal_path(graph, chain, family.member(v), family.member(other))
            side = set(data.side_vertices(edge, v))
            values = {t[u] for u in side}
            off_values = {t[u] for u in graph.vertex_ids if u not in side}
            if len(values) != 1 or off_values not in ({0}, set()):
                raise ConditionIIViolated(
                    f"members at {v!r} and {other!r} are not edge-side related"
                )
            count = values.pop()
            if count < 0:
                raise ConditionIIViolated("negative edge-side twist count")
            counts[(edge, v)] = count
            replay = family.member(v)
            for _ in range(count):
                replay = twist_edge_side(graph, chain, replay, edge, v, data)
            if replay != family.member(other):
                raise ConditionIIViolated("edge-side replay missed the member")
    out = PctFamily(graph, chain, data, family, counts)
    if check_restrictions:
        _check_subtree_restrictions(out)
    return out


def _connected_subtrees_containing(data: MultitreeData, v: str) -> Iterable[frozenset]:
    """All vertex sets of connected subtrees of the collapse containing v."""
    found = {frozenset([v])}
    frontier = [frozenset([v])]
    while frontier:
        nxt = []
        for s in frontier:
            for x in s:
                for u in data.bar_neighbors(x):
                    if u not in s:
                        bigger = s | {u}
                        if bigger not in found:
                            found.add(bigger)
                            nxt.append(bigger)
        frontier = nxt
    return found


def _check_subtree_restrictions(fam: PctFamily) -> None:
    """Members stay concentrated when restricted to any connected subtree."""
    graph, chain = fam.graph, fam.chain
    for v in graph.vertex_ids:
        member = fam.member(v)
        for subset in _connected_subtrees_containing(fam.data, v):
            if len(subset) == len(graph.vertex_ids):
                continue
            sub_vertices = [(u, graph.vertex_genus(u)) for u in sorted(subset)]
            sub_edges = [
                (e, *graph.ends(e))
                for e in graph.edge_ids
                if set(graph.ends(e)) <= subset
            ]
            restricted = MultiGraph(sub_vertices, sub_edges)
            r_chain = ChainStructure(
                restricted, {e: chain[e] for e, _, _ in sub_edges}
            )
            r_adm = AdmissibleMultidegree(
                restricted,
                r_chain,
                {u: member.w(u) for u in sorted(subset)},
                {e: member.mu(e) for e, _, _ in sub_edges},
            )
            if not is_concentrated(restricted, r_chain, r_adm, v)[0]:
                raise InternalInvariantError(
                    f"member at {v!r} lost concentration on subtree {sorted(subset)}"
                )


class DivisorSequence:
    """Node divisors obtained by repeatedly twisting one side of an edge."""

    def __init__(self, side: Side, divisors: Sequence[NodeDivisor]):
        self.side = side
        self.divisors = tuple(divisors)
        if self.divisors[0] != NodeDivisor():
            raise InvalidFiltration("sequence must start at the zero divisor")
        for a, b in zip(self.divisors, self.divisors[1:]):
            if not a <= b:
                raise InvalidFiltration("sequence must be nondecreasing")
        if not all(d.is_effective() for d in self.divisors):
            raise InvalidFiltration("sequence must be effective")

    @property
    def degrees(self) -> Tuple[int, ...]:
        return tuple(d.degree for d in self.divisors)

    def critical_indices(self) -> Tuple[int, ...]:
        return tuple(
            i
            for i in range(len(self.divisors) - 1)
            if self.divisors[i + 1] != self.divisors[i]
        )

    def __len__(self) -> int:
        return len(self.divisors)


def divisor_sequences(
    fam: PctFamily,
) -> Dict[Side, DivisorSequence]:
    """For each (edge, vertex) side, the divisors D_i recorded at the vertex
    after i edge-side twists of its member, for i = 0..b+1."""
    graph, chain, data = fam.graph, fam.chain, fam.data
    out: Dict[Side, DivisorSequence] = {}
    for edge in data.bar_edges:
        for v in edge:
            b = fam.b(edge, v)
            divisors = []
            current = fam.member(v)
            for i in range(b + 2):
                divisors.append(node_divisor(graph, chain, fam.family, current, v))
                current = twist_edge_side(graph, chain, current, edge, v, data)
            out[(edge, v)] = DivisorSequence((edge, v), divisors)
    return out


def multivanishing_sequence(
    degrees: Sequence[int], dims: Sequence[int]
) -> Tuple[int, ...]:
    """Vanishing orders along a nondecreasing divisor sequence.

    degrees[i] is the degree of the i-th divisor (strictly increasing exactly
    at critical indices); dims[i] is the dimension of the subspace vanishing
    along it.  The value degrees[i] appears dims[i] - dims[i+1] times.
    """
    if len(degrees) != len(dims):
        raise InvalidFiltration("degrees and dims must have equal length")
    if degrees[0] != 0:
        raise InvalidFiltration("the sequence must start at degree 0")
    if any(a > b for a, b in zip(degrees, degrees[1:])):
        raise InvalidFiltration("degrees must be nondecreasing")
    if any(a < b for a, b in zip(dims, dims[1:])):
        raise InvalidFiltration("dims must be nonincreasing")
    if dims[-1] != 0:
        raise InvalidFiltration("dims must end at 0 (the last divisor exceeds d)")
    for i in range(len(degrees) - 1):
        if degrees[i + 1] == degrees[i] and dims[i + 1] != dims[i]:
            raise InvalidFiltration(
                "dims may only drop at critical indices"
            )
    out: List[int] = []
    for i in range(len(degrees) - 1):
        if degrees[i + 1] > degrees[i]:
            out.extend([degrees[i]] * (dims[i] - dims[i + 1]))
    return tuple(out)


class VanishingProfile:
    """Abstract multivanishing sequence a_0 <= ... <= a_r for one side."""

    def __init__(self, values: Sequence[int]):
        self.values = tuple(int(a) for a in values)
        if any(a > b for a, b in zip(self.values, self.values[1:])):
            raise InconsistentProfile("profile must be nondecreasing")

    @property
    def r(self) -> int:
        return len(self.values) - 1

    def __getitem__(self, i: int) -> int:
        return self.values[i]

    def __eq__(self, other) -> bool:
        return isinstance(other, VanishingProfile) and self.values == other.values

    def __repr__(self) -> str:
        return f"VanishingProfile{self.values}"


def _critical_index_for(seq: DivisorSequence, value: int) -> int:
    for i in seq.critical_indices():
        if seq.degrees[i] == value:
            return i
    raise InconsistentProfile(
        f"profile value {value} is not a critical degree of the sequence"
    )


def check_inequality(
    profile_v: VanishingProfile,
    profile_w: VanishingProfile,
    seq_v: DivisorSequence,
    seq_w: DivisorSequence,
    b: int,
) -> Tuple[bool, Optional[Tuple[str, int]]]:
    """The multivanishing inequality across one edge, checked both ways.

    For each position l, the profile value on one side is realized at a
    critical index j, and the opposite profile at position r - l must
    dominate the degree b - j steps into the opposite sequence.
    """
    r = profile_v.r
    if profile_w.r != r:
        raise InconsistentProfile("profiles have different lengths")
    for direction, (pa, pb, sa, sb) in (
        ("forward", (profile_v, profile_w, seq_v, seq_w)),
        ("backward", (profile_w, profile_v, seq_w, seq_v)),
    ):
        for ell in range(r + 1):
            j = _critical_index_for(sa, pa[ell])
            required = sb.divisors[b - j].degree
            if pb[r - ell] < required:
                return False, (direction, ell)
    return True, None


def equality_profiles(
    seq_v: DivisorSequence,
    seq_w: DivisorSequence,
    b: int,
    picks: Sequence[int],
) -> Tuple[VanishingProfile, VanishingProfile]:
    """Complementary profile pair meeting the inequality with equality.

    picks is a nondecreasing multiset of critical indices of the first
    sequence; the opposite profile evaluates the opposite sequence at the
    complementary indices, which are critical on that side.
    """
    crit_v = set(seq_v.critical_indices())
    if any(j not in crit_v for j in picks):
        raise InconsistentProfile("picks must be critical indices")
    values_v = [seq_v.degrees[j] for j in sorted(picks)]
    values_w = [seq_w.degrees[b - j] for j in sorted(picks, reverse=True)]
    return VanishingProfile(values_v), VanishingProfile(values_w)


def pct_witness(
    graph: MultiGraph,
    chain: ChainStructure,
    w0: AdmissibleMultidegree,
    r_v: Mapping[str, int],
    profiles: Mapping[Side, VanishingProfile],
    fam: Optional[PctFamily] = None,
    sequences: Optional[Dict[Side, DivisorSequence]] = None,
) -> Dict[str, object]:
    """Build the witness multidegree from vanishing profiles.

    Each side receives a twist count: the critical index realizing the profile
    value at position r - (side weight), with the far side complemented to b.
    The witness is assembled by twisting outward from a root; certificates
    check root independence, the side-sum identity, and core membership.
    """
    fam = fam or pct_family(graph, chain, w0, check_restrictions=False)
    data = fam.data
    sequences = sequences or divisor_sequences(fam)

    r = sum(r_v.get(v, 0) for v in graph.vertex_ids)
    side_weight: Dict[Side, int] = {}
    for edge in data.bar_edges:
        for v in edge:
            side_weight[(edge, v)] = sum(
                r_v.get(u, 0) for u in data.side_vertices(edge, v)
            )

    for side, profile in profiles.items():
        if profile.r != r:
            raise InconsistentProfile(
                f"profile at {side} has r={profile.r}, expected {r}"
            )

    # verify the inequality on every edge before building anything
    for edge in data.bar_edges:
        a, b_vertex = edge
        ok, failure = check_inequality(
            profiles[(edge, a)],
            profiles[(edge, b_vertex)],
            sequences[(edge, a)],
            sequences[(edge, b_vertex)],
            fam.b(edge, a),
        )
        if not ok:
            raise ProfileViolatesI(f"inequality fails on {edge} at {failure}")

    t: Dict[Side, int] = {}
    for edge in data.bar_edges:
        a, b_vertex = edge
        b_count = fam.b(edge, a)
        seq_a = sequences[(edge, a)]
        pos = r - side_weight[(edge, a)]
        t[(edge, a)] = _critical_index_for(seq_a, profiles[(edge, a)][pos])
        t[(edge, b_vertex)] = b_count - t[(edge, a)]
        if t[(edge, b_vertex)] < 0:
            raise ProfileViolatesI(
                f"complementary count on {edge} is negative"
            )

    def build_from(root: str) -> AdmissibleMultidegree:
        current = fam.member(root)
        seen = {root}
        stack = [root]
        while stack:
            v = stack.pop()
            for u in sorted(data.bar_neighbors(v)):
                if u in seen:
                    continue
                edge = tuple(sorted((v, u)))
                for _ in range(t[(edge, v)]):
                    current = twist_edge_side(graph, chain, current, edge, v, data)
                seen.add(u)
                stack.append(u)
        return current

    root = graph.base_vertex()
    witness = build_from(root)

    cert_counts = all(build_from(v) == witness for v in graph.vertex_ids)
    cert_codim = all(
        sum(
            side_weight[(tuple(sorted((v, u))), u)]
            for u in data.bar_neighbors(v)
        )
        == r - r_v.get(v, 0)
        for v in graph.vertex_ids
    )
    cert_core = in_twist_core(fam.family, witness)

    return {
        "witness": witness,
        "t": t,
        "r": r,
        "certificates": {
            "edge_side_counts": cert_counts,
            "codimension_sum": cert_codim,
            "core_membership": cert_core,
        },
    }
