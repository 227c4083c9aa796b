"""Operation handlers shared by the FastAPI routes and the CLI.

Each handler takes a validated request model and returns a plain JSON-ready
dict; all mathematical work is delegated to the core modules.
"""

from __future__ import annotations

from typing import Dict

from .. import brill, chains, graphs, metric, pct, serialize, twistgraph
from . import models

SCHEMA = serialize.SCHEMA


def _graph(req_graph) -> graphs.MultiGraph:
    return serialize.parse_graph(req_graph)


def _chain_setup(req):
    graph = serialize.parse_graph(req.graph)
    chain = serialize.parse_chain(req.chain, graph)
    return graph, chain


def _metric(req_mg) -> metric.MetricGraph:
    return serialize.parse_metric_graph(req_mg)


# -- graph_core --------------------------------------------------------------


def graph_fire(req: models.FireRequest) -> Dict:
    g = _graph(req.graph)
    out = graphs.fire(g, serialize.parse_divisor(req.divisor), req.vertex)
    return {"schema": SCHEMA, "divisor": serialize.emit_divisor(out)}


def graph_reduce(req: models.ReduceRequest) -> Dict:
    g = _graph(req.graph)
    reduced, twists = graphs.reduce_divisor(
        g, serialize.parse_divisor(req.divisor), req.at
    )
    return {
        "schema": SCHEMA,
        "reduced": serialize.emit_divisor(reduced),
        "twists": serialize.emit_twist_vector(twists),
    }


def graph_is_reduced(req: models.ReduceRequest) -> Dict:
    g = _graph(req.graph)
    value = graphs.is_v_reduced(g, serialize.parse_divisor(req.divisor), req.at)
    return {"schema": SCHEMA, "value": value}


def graph_rank(req: models.GraphDivisorRequest) -> Dict:
    g = _graph(req.graph)
    return {
        "schema": SCHEMA,
        "rank": graphs.rank(g, serialize.parse_divisor(req.divisor)),
    }


def graph_canonical(req: models.GraphOnlyRequest) -> Dict:
    g = _graph(req.graph)
    return {
        "schema": SCHEMA,
        "divisor": serialize.emit_divisor(graphs.canonical_divisor(g)),
        "genus": g.genus(),
    }


def graph_linear_equiv(req: models.LinearEquivRequest) -> Dict:
    g = _graph(req.graph)
    t = graphs.linear_equiv(
        g, serialize.parse_divisor(req.a), serialize.parse_divisor(req.b)
    )
    return {
        "schema": SCHEMA,
        "equivalent": t is not None,
        "twists": serialize.emit_twist_vector(t) if t is not None else None,
    }


# -- chain_admissible ---------------------------------------------------------


def chain_subdivide(req: models.ChainRequest) -> Dict:
    graph, chain = _chain_setup(req)
    sub = chains.subdivide(graph, chain)
    return {"schema": SCHEMA, "graph": serialize.emit_graph(sub.graph)}


def chain_induced(req: models.MultidegreeRequest) -> Dict:
    graph, chain = _chain_setup(req)
    adm = serialize.parse_admissible(req.multidegree, graph, chain)
    sub = chains.subdivide(graph, chain)
    return {
        "schema": SCHEMA,
        "divisor": serialize.emit_divisor(chains.induced_divisor(sub, adm)),
    }


def chain_twist(req: models.TwistRequest) -> Dict:
    graph, chain = _chain_setup(req)
    adm = serialize.parse_admissible(req.multidegree, graph, chain)
    out = chains.twist(graph, chain, adm, req.vertex, req.direction)
    return {"schema": SCHEMA, "multidegree": serialize.emit_admissible(out)}


def chain_is_concentrated(req: models.ConcentrateRequest) -> Dict:
    graph, chain = _chain_setup(req)
    adm = serialize.parse_admissible(req.multidegree, graph, chain)
    ok, order = chains.is_concentrated(graph, chain, adm, req.at)
    return {
        "schema": SCHEMA,
        "concentrated": ok,
        ("ordering" if ok else "failing_prefix"): list(order),
    }


def chain_concentrate(req: models.ConcentrateRequest) -> Dict:
    graph, chain = _chain_setup(req)
    adm = serialize.parse_admissible(req.multidegree, graph, chain)
    out, twists = chains.concentrate(graph, chain, adm, req.at)
    return {
        "schema": SCHEMA,
        "multidegree": serialize.emit_admissible(out),
        "twists": serialize.emit_twist_vector(twists),
    }


def chain_twist_equiv(req: models.TwistEquivRequest) -> Dict:
    graph, chain = _chain_setup(req)
    a = serialize.parse_admissible(req.a, graph, chain)
    b = serialize.parse_admissible(req.b, graph, chain)
    t = chains.twist_equivalent(graph, chain, a, b)
    return {
        "schema": SCHEMA,
        "equivalent": t is not None,
        "twists": serialize.emit_twist_vector(t) if t is not None else None,
    }


# -- twist_graph ---------------------------------------------------------------


def core_minimal_path(req: models.TwistEquivRequest) -> Dict:
    graph, chain = _chain_setup(req)
    a = serialize.parse_admissible(req.a, graph, chain)
    b = serialize.parse_admissible(req.b, graph, chain)
    t = twistgraph.minimal_path(graph, chain, a, b)
    return {"schema": SCHEMA, "twists": serialize.emit_twist_vector(t)}


def core_enumerate(req: models.CoreRequest) -> Dict:
    graph, chain = _chain_setup(req)
    w0 = serialize.parse_admissible(req.multidegree, graph, chain)
    core = twistgraph.enumerate_twist_core(graph, chain, w0)
    return {
        "schema": SCHEMA,
        "members": [serialize.emit_admissible(w) for w in core],
        "family": {
            v: serialize.emit_admissible(core.family.member(v))
            for v in graph.vertex_ids
        },
        "twist_edges": [
            {"from": i, "to": j, "vertex": v} for i, j, v in core.twist_edges()
        ],
        "connected_under_single_twists": core.is_connected_under_single_twists(),
        "dot": core.to_dot(),
    }


def core_node_divisor(req: models.NodeDivisorRequest) -> Dict:
    graph, chain = _chain_setup(req)
    w = serialize.parse_admissible(req.multidegree, graph, chain)
    family = twistgraph.ConcentratedFamily.canonical(graph, chain, w)
    d = twistgraph.node_divisor(graph, chain, family, w, req.at)
    return {"schema": SCHEMA, "node_divisor": serialize.emit_node_divisor(d)}


def core_chain_points(req: models.MultidegreeRequest) -> Dict:
    graph, chain = _chain_setup(req)
    w = serialize.parse_admissible(req.multidegree, graph, chain)
    mg = twistgraph.metric_graph_of_chain(graph, chain)
    d = twistgraph.chain_point_divisor(mg, w)
    return {
        "schema": SCHEMA,
        "metric_graph": serialize.emit_metric_graph(mg),
        "divisor": serialize.emit_metric_divisor(d),
    }


def core_dimension_bound(req: models.DimensionBoundRequest) -> Dict:
    graph, chain = _chain_setup(req)
    w0 = serialize.parse_admissible(req.multidegree, graph, chain)
    result, bound = twistgraph.dimension_bound_twist(graph, chain, w0, req.at)
    return {
        "schema": SCHEMA,
        "multidegree": serialize.emit_admissible(result),
        "bound": bound,
    }


# -- metric_graph ----------------------------------------------------------------


def metric_rank_handler(req: models.MetricRankRequest) -> Dict:
    mg = _metric(req.metric_graph)
    d = serialize.parse_metric_divisor(req.divisor, mg)
    return {
        "schema": SCHEMA,
        "rank": metric.metric_rank(mg, d, refine_check=req.refine_check),
    }


def metric_reduce_handler(req: models.MetricReduceRequest) -> Dict:
    mg = _metric(req.metric_graph)
    d = serialize.parse_metric_divisor(req.divisor, mg)
    q = serialize.parse_metric_point(req.at, mg)
    reduced, f = metric.reduce_metric(mg, d, q)
    return {
        "schema": SCHEMA,
        "reduced": serialize.emit_metric_divisor(reduced),
        "function": serialize.emit_pl_function(f),
    }


def metric_equiv_handler(req: models.MetricEquivRequest) -> Dict:
    mg = _metric(req.metric_graph)
    a = serialize.parse_metric_divisor(req.a, mg)
    b = serialize.parse_metric_divisor(req.b, mg)
    f = metric.metric_linear_equiv(mg, a, b)
    return {
        "schema": SCHEMA,
        "equivalent": f is not None,
        "function": serialize.emit_pl_function(f) if f is not None else None,
    }


def metric_move_chips(req: models.MoveChipsRequest) -> Dict:
    mg = _metric(req.metric_graph)
    d = serialize.parse_metric_divisor(req.divisor, mg)
    values = {v: serialize.parse_rational(x) for v, x in req.values.items()}
    out, f = metric.move_chips_edge_reduced(mg, d, values)
    return {
        "schema": SCHEMA,
        "divisor": serialize.emit_metric_divisor(out),
        "function": serialize.emit_pl_function(f),
    }


def metric_decompose(req: models.DecomposeRequest) -> Dict:
    mg = _metric(req.metric_graph)
    a = serialize.parse_metric_divisor(req.a, mg)
    b = serialize.parse_metric_divisor(req.b, mg)
    f = serialize.parse_pl_function(req.function, mg)
    report = metric.equiv_decompose(mg, a, b, f)
    return {
        "schema": SCHEMA,
        "order": report["order"],
        "stages": [serialize.emit_metric_divisor(d) for d in report["stages"]],
        "certificates": report["certificates"],
    }


# -- brill_noether ------------------------------------------------------------


def _witness_payload(report: Dict) -> Dict:
    witness = report["witness"]
    return {
        "schema": SCHEMA,
        "verdict": report["verdict"],
        "witness": serialize.emit_metric_divisor(witness.divisor),
        "degree": witness.degree,
        "rank": witness.claimed_rank,
        "verified": witness.verified,
        "genus": report["genus"],
        "maximal_gonality": report["maximal_gonality"],
        "evidence_level": report["evidence_level"],
        "trace": witness.trace,
    }


def bn_gonality(req: models.GonalityRequest) -> Dict:
    mg = _metric(req.metric_graph)
    report = brill.gonality_search_lattice(
        mg, n=req.lattice, d_max=req.d_max, budget=req.budget
    )
    return {
        "schema": SCHEMA,
        "found_degree": report["found_degree"],
        "witness": (
            serialize.emit_metric_divisor(report["witness"])
            if report["witness"] is not None
            else None
        ),
        "lattice": report["lattice"],
        "evidence_level": report["evidence_level"],
        "statement": report["statement"],
    }


def bn_rank(req: models.BnRankRequest) -> Dict:
    mg = _metric(req.metric_graph)
    report = brill.bn_rank_lattice(
        mg, req.r, req.d, req.rho_prime, n=req.lattice, budget=req.budget
    )
    return {
        "schema": SCHEMA,
        "holds_on_lattice": report["holds_on_lattice"],
        "counterexample": (
            serialize.emit_metric_divisor(report["counterexample"])
            if report["counterexample"] is not None
            else None
        ),
        "lattice": report["lattice"],
        "statement": report["statement"],
    }


def bn_verdict(req: models.VerdictRequest) -> Dict:
    mg = _metric(req.metric_graph)
    report = brill.multitree_verdict(mg)
    return {
        "schema": SCHEMA,
        "verdict": report["verdict"],
        "obstructions": [
            {k: (list(v) if isinstance(v, tuple) else v) for k, v in o.items()}
            for o in report["obstructions"]
        ],
    }


def _parts(models_list) -> list:
    return [(_metric(p.metric_graph), p.attach) for p in models_list]


def bn_wedge_witness(req: models.WedgeWitnessRequest) -> Dict:
    report = brill.wedge_gonality_witness(
        _parts(req.parts), even_part_maximal=req.even_part_maximal
    )
    return _witness_payload(report)


def bn_join_witness(req: models.JoinWitnessRequest) -> Dict:
    lengths = [serialize.parse_rational(x) for x in req.path_lengths]
    report = brill.join_gonality_witness(
        *_parts([req.part1, req.part2]), lengths
    )
    payload = _witness_payload(report)
    payload["m"] = report["m"]
    return payload


def bn_w1_probe_join(req: models.W1ProbeJoinRequest) -> Dict:
    part1, part2 = _parts([req.part1, req.part2])
    lengths = [serialize.parse_rational(x) for x in req.path_lengths]
    grid1 = [serialize.parse_metric_point(p, part1[0]) for p in req.grid1]
    grid2 = [serialize.parse_metric_point(p, part2[0]) for p in req.grid2]
    report = brill.w1_family_probe_join(part1, part2, lengths, grid1, grid2)
    return {
        "schema": SCHEMA,
        "family_size": report["family_size"],
        "distinct_classes": report["distinct_classes"],
    }


def bn_w1_probe_wedge(req: models.W1ProbeWedgeRequest) -> Dict:
    parts = _parts(req.parts)
    grid = [
        serialize.parse_metric_point(p, parts[req.even_index][0]) for p in req.grid
    ]
    report = brill.w1_family_probe_wedge(parts, req.even_index, grid)
    return {
        "schema": SCHEMA,
        "family_size": report["family_size"],
        "distinct_classes": report["distinct_classes"],
    }


# -- pct -----------------------------------------------------------------------


def pct_multitree(req: models.GraphOnlyRequest) -> Dict:
    g = _graph(req.graph)
    data = pct.is_multitree(g)
    return {
        "schema": SCHEMA,
        "is_multitree": data.is_multitree,
        "bar_edges": [list(e) for e in data.bar_edges],
        "failing_cycle": list(data.failing_cycle),
    }


def pct_family_handler(req: models.PctFamilyRequest) -> Dict:
    graph, chain = _chain_setup(req)
    w0 = serialize.parse_admissible(req.multidegree, graph, chain)
    fam = pct.pct_family(graph, chain, w0)
    return {
        "schema": SCHEMA,
        "members": {
            v: serialize.emit_admissible(fam.member(v)) for v in graph.vertex_ids
        },
        "counts": {
            serialize.side_key(edge, v): b for (edge, v), b in sorted(fam.counts.items())
        },
    }


def pct_sequences(req: models.PctFamilyRequest) -> Dict:
    graph, chain = _chain_setup(req)
    w0 = serialize.parse_admissible(req.multidegree, graph, chain)
    fam = pct.pct_family(graph, chain, w0, check_restrictions=False)
    seqs = pct.divisor_sequences(fam)
    return {
        "schema": SCHEMA,
        "sequences": {
            serialize.side_key(*side): {
                "divisors": [serialize.emit_node_divisor(d) for d in seq.divisors],
                "degrees": list(seq.degrees),
                "critical": list(seq.critical_indices()),
            }
            for side, seq in sorted(seqs.items())
        },
    }


def pct_multivanishing(req: models.MultivanishingRequest) -> Dict:
    seq = pct.multivanishing_sequence(req.degrees, req.dims)
    return {"schema": SCHEMA, "sequence": list(seq)}


def pct_witness_handler(req: models.PctWitnessRequest) -> Dict:
    graph, chain = _chain_setup(req)
    w0 = serialize.parse_admissible(req.multidegree, graph, chain)
    fam = pct.pct_family(graph, chain, w0, check_restrictions=False)
    seqs = pct.divisor_sequences(fam)
    profiles = {
        serialize.parse_side_key(k): pct.VanishingProfile(v)
        for k, v in req.profiles.items()
    }
    report = pct.pct_witness(
        graph, chain, w0, req.weights, profiles, fam=fam, sequences=seqs
    )
    return {
        "schema": SCHEMA,
        "witness": serialize.emit_admissible(report["witness"]),
        "t": {serialize.side_key(*side): c for side, c in sorted(report["t"].items())},
        "r": report["r"],
        "certificates": report["certificates"],
        "note": (
            "profile checks are purely combinatorial; whether vanishing "
            "profiles are geometrically realizable is not decided here"
        ),
    }


# -- fixtures --------------------------------------------------------------------


def fixture_handler(req: models.FixtureRequest) -> Dict:
    fix = brill.build_fixture(req.kind, **req.params)
    return {
        "schema": SCHEMA,
        "kind": fix.kind,
        "metric_graph": serialize.emit_metric_graph(fix.mg),
        "marked": fix.marked,
        "params": {
            k: v for k, v in fix.params.items() if isinstance(v, (int, str, bool))
        },
    }
