"""FastAPI application exposing the core operations as POST endpoints.

Route signatures are built dynamically from the handler table, so annotations
must stay runtime-evaluated here (no lazy annotations).
"""

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from ..errors import ParseError, TropdegError
from . import handlers, models


def create_app() -> FastAPI:
    app = FastAPI(
        title="tropdeg",
        description=(
            "Chip-firing, admissible multidegrees, and divisor ranks on finite "
            "and metric graphs."
        ),
        version="0.1.0",
    )

    @app.exception_handler(ParseError)
    async def parse_error(request: Request, exc: ParseError):
        return JSONResponse(
            status_code=400, content={"error": "parse", "detail": str(exc)}
        )

    @app.exception_handler(TropdegError)
    async def domain_error(request: Request, exc: TropdegError):
        return JSONResponse(
            status_code=422,
            content={"error": type(exc).__name__, "detail": str(exc)},
        )

    @app.get("/v1/health")
    def health():
        return {"schema": handlers.SCHEMA, "status": "ok"}

    # graph_core
    app.post("/v1/graph/fire")(_wrap(handlers.graph_fire, models.FireRequest))
    app.post("/v1/graph/reduce")(_wrap(handlers.graph_reduce, models.ReduceRequest))
    app.post("/v1/graph/is-reduced")(
        _wrap(handlers.graph_is_reduced, models.ReduceRequest)
    )
    app.post("/v1/graph/rank")(_wrap(handlers.graph_rank, models.GraphDivisorRequest))
    app.post("/v1/graph/canonical")(
        _wrap(handlers.graph_canonical, models.GraphOnlyRequest)
    )
    app.post("/v1/graph/linear-equiv")(
        _wrap(handlers.graph_linear_equiv, models.LinearEquivRequest)
    )

    # chain_admissible
    app.post("/v1/chain/subdivide")(
        _wrap(handlers.chain_subdivide, models.ChainRequest)
    )
    app.post("/v1/chain/induced")(
        _wrap(handlers.chain_induced, models.MultidegreeRequest)
    )
    app.post("/v1/chain/twist")(_wrap(handlers.chain_twist, models.TwistRequest))
    app.post("/v1/chain/is-concentrated")(
        _wrap(handlers.chain_is_concentrated, models.ConcentrateRequest)
    )
    app.post("/v1/chain/concentrate")(
        _wrap(handlers.chain_concentrate, models.ConcentrateRequest)
    )
    app.post("/v1/chain/twist-equiv")(
        _wrap(handlers.chain_twist_equiv, models.TwistEquivRequest)
    )

    # twist_graph
    app.post("/v1/core/minimal-path")(
        _wrap(handlers.core_minimal_path, models.TwistEquivRequest)
    )
    app.post("/v1/core/enumerate")(_wrap(handlers.core_enumerate, models.CoreRequest))
    app.post("/v1/core/node-divisor")(
        _wrap(handlers.core_node_divisor, models.NodeDivisorRequest)
    )
    app.post("/v1/core/chain-points")(
        _wrap(handlers.core_chain_points, models.MultidegreeRequest)
    )
    app.post("/v1/core/dimension-bound")(
        _wrap(handlers.core_dimension_bound, models.DimensionBoundRequest)
    )

    # metric_graph
    app.post("/v1/metric/rank")(
        _wrap(handlers.metric_rank_handler, models.MetricRankRequest)
    )
    app.post("/v1/metric/reduce")(
        _wrap(handlers.metric_reduce_handler, models.MetricReduceRequest)
    )
    app.post("/v1/metric/linear-equiv")(
        _wrap(handlers.metric_equiv_handler, models.MetricEquivRequest)
    )
    app.post("/v1/metric/move-chips")(
        _wrap(handlers.metric_move_chips, models.MoveChipsRequest)
    )
    app.post("/v1/metric/decompose")(
        _wrap(handlers.metric_decompose, models.DecomposeRequest)
    )

    # brill_noether
    app.post("/v1/bn/gonality")(_wrap(handlers.bn_gonality, models.GonalityRequest))
    app.post("/v1/bn/rank")(_wrap(handlers.bn_rank, models.BnRankRequest))
    app.post("/v1/bn/verdict")(_wrap(handlers.bn_verdict, models.VerdictRequest))
    app.post("/v1/bn/wedge-witness")(
        _wrap(handlers.bn_wedge_witness, models.WedgeWitnessRequest)
    )
    app.post("/v1/bn/join-witness")(
        _wrap(handlers.bn_join_witness, models.JoinWitnessRequest)
    )
    app.post("/v1/bn/w1-probe-join")(
        _wrap(handlers.bn_w1_probe_join, models.W1ProbeJoinRequest)
    )
    app.post("/v1/bn/w1-probe-wedge")(
        _wrap(handlers.bn_w1_probe_wedge, models.W1ProbeWedgeRequest)
    )

    # pct
    app.post("/v1/pct/multitree")(
        _wrap(handlers.pct_multitree, models.GraphOnlyRequest)
    )
    app.post("/v1/pct/family")(
        _wrap(handlers.pct_family_handler, models.PctFamilyRequest)
    )
    app.post("/v1/pct/sequences")(
        _wrap(handlers.pct_sequences, models.PctFamilyRequest)
    )
    app.post("/v1/pct/multivanishing")(
        _wrap(handlers.pct_multivanishing, models.MultivanishingRequest)
    )
    app.post("/v1/pct/witness")(
        _wrap(handlers.pct_witness_handler, models.PctWitnessRequest)
    )

    # fixtures
    app.post("/v1/fixture")(_wrap(handlers.fixture_handler, models.FixtureRequest))

    return app


def _wrap(handler, model):
    def route(payload: model):  # type: ignore[valid-type]
        return handler(payload)

    route.__name__ = handler.__name__
    return route


app = create_app()
