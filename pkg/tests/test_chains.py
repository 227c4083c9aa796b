import itertools
import random

import pytest

from tropdeg.chains import (
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
from tropdeg.errors import InvalidChain
from tropdeg.graphs import (
    Divisor,
    TwistVector,
    build_graph,
    fire,
    is_v_reduced,
    reduce_divisor,
)

from conftest import random_multigraph


def trivial(graph):
    return ChainStructure(graph)


def random_chain(rng, graph, max_n=4):
    return ChainStructure(graph, {e: rng.randint(1, max_n) for e in graph.edge_ids})


def random_admissible(rng, graph, chain, spread=3):
    w = {v: rng.randint(-spread, spread) for v in graph.vertex_ids}
    mu = {e: rng.randrange(chain[e]) for e in graph.edge_ids}
    return AdmissibleMultidegree(graph, chain, w, mu)


class TestSubdivide:
    def test_trivial_chain_is_same_graph(self, triangle):
        sub = subdivide(triangle, trivial(triangle))
        assert len(sub.graph.vertex_ids) == 3
        assert sub.graph.genus() == triangle.genus()

    def test_single_edge_path(self):
        g = build_graph(["a", "b"], [("e", "a", "b")])
        sub = subdivide(g, ChainStructure(g, {"e": 4}))
        assert len(sub.chain_vertices("e")) == 3
        assert len(sub.graph.vertex_ids) == 5
        assert all(sub.graph.valence(x) == 2 for x in sub.chain_vertices("e"))

    def test_genus_preserved(self, banana3):
        sub = subdivide(banana3, ChainStructure(banana3, {"e1": 2, "e2": 2, "e3": 2}))
        assert sub.graph.genus() == 2

    def test_invalid_chain(self, triangle):
        with pytest.raises(InvalidChain):
            ChainStructure(triangle, {"ab": 0})
        with pytest.raises(InvalidChain):
            ChainStructure(triangle, {"nope": 2})

    def test_stray_multidegree_keys_rejected(self, triangle):
        from tropdeg.errors import UnknownEdge, UnknownVertex

        n = ChainStructure(triangle)
        with pytest.raises(UnknownVertex):
            AdmissibleMultidegree(triangle, n, {"zz": 1})
        with pytest.raises(UnknownEdge):
            AdmissibleMultidegree(triangle, n, {}, {"nope": 1})

    def test_vertex_count(self):
        rng = random.Random(5)
        for _ in range(20):
            g = random_multigraph(rng, max_vertices=5, max_extra=3)
            n = random_chain(rng, g)
            sub = subdivide(g, n)
            expected = len(g.vertex_ids) + sum(n[e] - 1 for e in g.edge_ids)
            assert len(sub.graph.vertex_ids) == expected


class TestInducedDivisor:
    def test_zero_positions(self, triangle):
        n = trivial(triangle)
        adm = AdmissibleMultidegree(triangle, n, {"a": 2, "b": -1})
        sub = subdivide(triangle, n)
        assert induced_divisor(sub, adm) == Divisor({"a": 2, "b": -1})

    def test_position_lands_from_tail(self):
        g = build_graph(["a", "b"], [("e", "a", "b")])
        n = ChainStructure(g, {"e": 4})
        sub = subdivide(g, n)
        adm = AdmissibleMultidegree(g, n, {}, {"e": 2})
        d = induced_divisor(sub, adm)
        assert d == Divisor({"e@2": 1})
        assert d.degree == adm.degree == 1

    def test_degree_always_preserved(self):
        rng = random.Random(8)
        for _ in range(30):
            g = random_multigraph(rng, max_vertices=5, max_extra=3)
            n = random_chain(rng, g)
            adm = random_admissible(rng, g, n)
            assert induced_divisor(subdivide(g, n), adm).degree == adm.degree


class TestAdmissibleFromDivisor:
    def test_roundtrip(self):
        rng = random.Random(21)
        for _ in range(30):
            g = random_multigraph(rng, max_vertices=5, max_extra=3)
            n = random_chain(rng, g)
            sub = subdivide(g, n)
            adm = random_admissible(rng, g, n)
            assert admissible_from_divisor(sub, induced_divisor(sub, adm)) == adm

    def test_rejects_coefficient_two(self):
        g = build_graph(["a", "b"], [("e", "a", "b")])
        sub = subdivide(g, ChainStructure(g, {"e": 4}))
        assert admissible_from_divisor(sub, Divisor({"e@2": 2})) is None

    def test_rejects_two_units_on_chain(self):
        g = build_graph(["a", "b"], [("e", "a", "b")])
        sub = subdivide(g, ChainStructure(g, {"e": 4}))
        assert admissible_from_divisor(sub, Divisor({"e@1": 1, "e@3": 1})) is None

    def test_reduced_divisor_is_chain_shaped(self):
        rng = random.Random(34)
        for _ in range(40):
            g = random_multigraph(rng, max_vertices=4, max_extra=3)
            n = random_chain(rng, g)
            sub = subdivide(g, n)
            adm = random_admissible(rng, g, n)
            v0 = rng.choice(g.vertex_ids)
            reduced, _ = reduce_divisor(sub.graph, induced_divisor(sub, adm), v0)
            assert admissible_from_divisor(sub, reduced) is not None


class TestTwist:
    def test_four_parallel_edges(self):
        g = build_graph(["v", "w"], [(f"e{i}", "v", "w") for i in range(4)])
        n = ChainStructure(g, {e: 3 for e in g.edge_ids})
        adm = AdmissibleMultidegree(
            g, n, {"v": 2}, {"e0": 0, "e1": 1, "e2": 2, "e3": 0}
        )
        out = twist(g, n, adm, "v")
        assert out.chain_part() == {"e0": 1, "e1": 2, "e2": 0, "e3": 1}
        assert out.w("v") == 0  # dropped by the two edges that had position 0
        assert out.w("w") == 1  # raised by the one edge that reached 0

    def test_trivial_chain_is_chip_firing(self):
        rng = random.Random(77)
        for _ in range(30):
            g = random_multigraph(rng, max_vertices=5, max_extra=4)
            n = trivial(g)
            adm = random_admissible(rng, g, n)
            v = rng.choice(g.vertex_ids)
            sub = subdivide(g, n)
            twisted = induced_divisor(sub, twist(g, n, adm, v))
            fired = fire(g, induced_divisor(sub, adm), v)
            assert twisted == fired

    def test_twist_untwist(self):
        rng = random.Random(99)
        for _ in range(30):
            g = random_multigraph(rng, max_vertices=5, max_extra=4)
            n = random_chain(rng, g)
            adm = random_admissible(rng, g, n)
            v = rng.choice(g.vertex_ids)
            assert twist(g, n, twist(g, n, adm, v, 1), v, -1) == adm
            assert twist(g, n, twist(g, n, adm, v, -1), v, 1) == adm

    def test_induced_compatibility_with_subdivision_firing(self):
        # Twisting at v matches firing v plus the inserted vertices between v
        # and the sigma(e,v)*mu(e)-th one over each incident edge.
        rng = random.Random(111)
        for _ in range(25):
            g = random_multigraph(rng, max_vertices=4, max_extra=3)
            n = random_chain(rng, g)
            sub = subdivide(g, n)
            adm = random_admissible(rng, g, n)
            v = rng.choice(g.vertex_ids)
            counts = {v: 1}
            for e in g.incident_edges(v):
                span = (g.sigma(e, v) * adm.mu(e)) % n[e]
                inner = sub.chain_vertices(e)
                if g.sigma(e, v) == 1:
                    toward = inner
                else:
                    toward = tuple(reversed(inner))
                for x in toward[:span]:
                    counts[x] = counts.get(x, 0) + 1
            lifted = Divisor(induced_divisor(sub, adm).coeffs())
            from tropdeg.graphs import apply_firings

            fired = apply_firings(sub.graph, lifted, TwistVector(counts))
            assert fired == induced_divisor(sub, twist(g, n, adm, v))


class TestConcentrated:
    def test_triangle_concentrated(self, triangle):
        n = trivial(triangle)
        adm = AdmissibleMultidegree(triangle, n, {"a": 3})
        ok, order = is_concentrated(triangle, n, adm, "a")
        assert ok and order == ("a", "b", "c")

    def test_triangle_not_concentrated(self, triangle):
        n = trivial(triangle)
        adm = AdmissibleMultidegree(triangle, n, {"a": 1, "b": 1, "c": 1})
        ok, prefix = is_concentrated(triangle, n, adm, "a")
        assert not ok
        assert prefix == ("a",)

    def test_single_vertex(self):
        g = build_graph(["z"], [])
        n = trivial(g)
        ok, order = is_concentrated(g, n, AdmissibleMultidegree(g, n, {"z": -5}), "z")
        assert ok and order == ("z",)

    def test_matches_subdivision(self):
        # concentrated on (graph, chain) iff the induced divisor is
        # concentrated on the subdivision with the trivial chain structure
        rng = random.Random(17)
        for _ in range(60):
            g = random_multigraph(rng, max_vertices=4, max_extra=3)
            n = random_chain(rng, g)
            sub = subdivide(g, n)
            adm = random_admissible(rng, g, n, spread=2)
            v0 = rng.choice(g.vertex_ids)
            lifted = admissible_from_divisor(sub, induced_divisor(sub, adm))
            assert lifted is not None
            got = is_concentrated(g, n, adm, v0)[0]
            via_sub = is_concentrated(
                sub.graph, ChainStructure(sub.graph), lifted_as_plain(sub, adm), v0
            )[0]
            assert got == via_sub

    def test_matches_burning_condition(self):
        # on a plain graph, concentrated == condition (2) of v-reducedness,
        # i.e. v-reduced once nonnegativity away from v0 is imposed
        rng = random.Random(29)
        for _ in range(60):
            g = random_multigraph(rng, max_vertices=5, max_extra=4)
            n = trivial(g)
            adm = random_admissible(rng, g, n, spread=2)
            v0 = rng.choice(g.vertex_ids)
            conc = is_concentrated(g, n, adm, v0)[0]
            d = Divisor(adm.vertex_part())
            if all(d[v] >= 0 for v in g.vertex_ids if v != v0):
                assert conc == is_v_reduced(g, d, v0)
            elif conc:
                assert not is_v_reduced(g, d, v0)

    def test_greedy_complete_vs_exhaustive(self):
        rng = random.Random(43)
        for _ in range(40):
            g = random_multigraph(rng, max_vertices=4, max_extra=3)
            n = random_chain(rng, g, max_n=3)
            adm = random_admissible(rng, g, n, spread=2)
            v0 = rng.choice(g.vertex_ids)
            greedy = is_concentrated(g, n, adm, v0)[0]
            exhaustive = False
            rest = [v for v in g.vertex_ids if v != v0]
            for perm in itertools.permutations(rest):
                current = twist(g, n, adm, v0, -1)
                good = True
                for v in perm:
                    if current.w(v) >= 0:
                        good = False
                        break
                    current = twist(g, n, current, v, -1)
                if good:
                    exhaustive = True
                    break
            assert greedy == exhaustive


def lifted_as_plain(sub, adm):
    d = induced_divisor(sub, adm)
    return AdmissibleMultidegree(
        sub.graph, ChainStructure(sub.graph), d.coeffs()
    )


class TestTwistEquivalent:
    def test_single_twist(self, triangle):
        rng = random.Random(3)
        n = trivial(triangle)
        adm = random_admissible(rng, triangle, n)
        out = twist(triangle, n, adm, "b")
        assert twist_equivalent(triangle, n, adm, out) == TwistVector({"b": 1})

    def test_degree_obstruction(self, triangle):
        n = trivial(triangle)
        a = AdmissibleMultidegree(triangle, n, {"a": 1})
        b = AdmissibleMultidegree(triangle, n, {"a": 2})
        assert twist_equivalent(triangle, n, a, b) is None

    def test_roundtrip_recovers_multiset(self):
        rng = random.Random(55)
        for _ in range(25):
            g = random_multigraph(rng, max_vertices=4, max_extra=3)
            n = random_chain(rng, g)
            adm = random_admissible(rng, g, n, spread=2)
            applied = {v: 0 for v in g.vertex_ids}
            out = adm
            for _ in range(5):
                v = rng.choice(g.vertex_ids)
                applied[v] += 1
                out = twist(g, n, out, v)
            t = twist_equivalent(g, n, adm, out)
            assert t is not None
            assert t == TwistVector(applied).normal_form(g)


class TestConcentrate:
    def test_triangle(self, triangle):
        n = trivial(triangle)
        adm = AdmissibleMultidegree(triangle, n, {"c": 3})
        out, t = concentrate(triangle, n, adm, "a")
        assert out.vertex_part() == {"a": 3, "b": 0, "c": 0}
        assert apply_twists(triangle, n, adm, t) == out

    def test_fixed_point(self, triangle):
        n = trivial(triangle)
        adm = AdmissibleMultidegree(triangle, n, {"a": 3})
        out, t = concentrate(triangle, n, adm, "a")
        assert out == adm and t.is_zero()

    def test_long_edge(self):
        # two vertices, one edge cut in three, all degree at the far vertex
        g = build_graph(["u", "v"], [("e", "u", "v")])
        n = ChainStructure(g, {"e": 3})
        adm = AdmissibleMultidegree(g, n, {"v": 2})
        out, _ = concentrate(g, n, adm, "u")
        assert out.vertex_part() == {"u": 2, "v": 0}
        assert out.mu("e") == 0

    def test_output_concentrated_nonneg_and_unique(self):
        rng = random.Random(61)
        for _ in range(40):
            g = random_multigraph(rng, max_vertices=4, max_extra=2)
            n = random_chain(rng, g, max_n=3)
            adm = random_admissible(rng, g, n, spread=2)
            v0 = rng.choice(g.vertex_ids)
            out, t = concentrate(g, n, adm, v0)
            assert is_concentrated(g, n, out, v0)[0]
            assert all(out.w(v) >= 0 for v in g.vertex_ids if v != v0)
            assert apply_twists(g, n, adm, t) == out
            # uniqueness in a small twist box around the result
            if len(g.vertex_ids) <= 3:
                others = [v for v in g.vertex_ids if v != v0]
                for counts in itertools.product(range(-4, 5), repeat=len(others)):
                    cand = apply_twists(
                        g, n, adm, TwistVector(dict(zip(others, counts)))
                    )
                    if cand == out:
                        continue
                    assert not (
                        is_concentrated(g, n, cand, v0)[0]
                        and all(
                            cand.w(v) >= 0 for v in g.vertex_ids if v != v0
                        )
                    )
