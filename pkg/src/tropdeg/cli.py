"""Command-line front end: a thin client over the service handlers.

Every subcommand builds the same request model the HTTP API accepts and
either executes it in-process (default) or POSTs it to a running service
(--server).  Output is canonical JSON (sorted keys) or aligned text with
--human.  Exit codes: 0 success, 2 domain error, 3 parse/usage error.
"""

from __future__ import annotations

import json
import os
import sys
from typing import Optional

import click

from .errors import ParseError, TropdegError
from .service import handlers, models

# argv that fails to parse is a parse error (exit 3), like any other bad input
click.UsageError.exit_code = 3

_ENDPOINTS = {
    "graph_fire": "/v1/graph/fire",
    "graph_reduce": "/v1/graph/reduce",
    "graph_is_reduced": "/v1/graph/is-reduced",
    "graph_rank": "/v1/graph/rank",
    "graph_canonical": "/v1/graph/canonical",
    "graph_linear_equiv": "/v1/graph/linear-equiv",
    "chain_subdivide": "/v1/chain/subdivide",
    "chain_induced": "/v1/chain/induced",
    "chain_twist": "/v1/chain/twist",
    "chain_is_concentrated": "/v1/chain/is-concentrated",
    "chain_concentrate": "/v1/chain/concentrate",
    "chain_twist_equiv": "/v1/chain/twist-equiv",
    "core_minimal_path": "/v1/core/minimal-path",
    "core_enumerate": "/v1/core/enumerate",
    "core_node_divisor": "/v1/core/node-divisor",
    "core_chain_points": "/v1/core/chain-points",
    "core_dimension_bound": "/v1/core/dimension-bound",
    "metric_rank_handler": "/v1/metric/rank",
    "metric_reduce_handler": "/v1/metric/reduce",
    "metric_equiv_handler": "/v1/metric/linear-equiv",
    "metric_move_chips": "/v1/metric/move-chips",
    "metric_decompose": "/v1/metric/decompose",
    "bn_gonality": "/v1/bn/gonality",
    "bn_rank": "/v1/bn/rank",
    "bn_verdict": "/v1/bn/verdict",
    "bn_wedge_witness": "/v1/bn/wedge-witness",
    "bn_join_witness": "/v1/bn/join-witness",
    "bn_w1_probe_join": "/v1/bn/w1-probe-join",
    "bn_w1_probe_wedge": "/v1/bn/w1-probe-wedge",
    "pct_multitree": "/v1/pct/multitree",
    "pct_family_handler": "/v1/pct/family",
    "pct_sequences": "/v1/pct/sequences",
    "pct_multivanishing": "/v1/pct/multivanishing",
    "pct_witness_handler": "/v1/pct/witness",
    "fixture_handler": "/v1/fixture",
}


def _load_json_arg(value: str, what: str) -> object:
    """Inline JSON, a file path, or '-' for stdin."""
    if value == "-":
        text = sys.stdin.read()
    elif value.lstrip().startswith(("{", "[")):
        text = value
    elif os.path.exists(value):
        with open(value, "r", encoding="utf-8") as fh:
            text = fh.read()
    else:
        raise ParseError(f"{what}: not inline JSON and no such file: {value!r}")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{what}: invalid JSON: {exc}") from exc


def _metric_graph_arg(value: str) -> dict:
    obj = _load_json_arg(value, "metric graph")
    if isinstance(obj, dict) and "metric_graph" in obj:
        obj = obj["metric_graph"]  # accept fixture output directly
    if not isinstance(obj, dict):
        raise ParseError("metric graph must be a JSON object")
    obj = {k: v for k, v in obj.items() if k != "schema"}
    if "lengths" not in obj and "edges" in obj:
        obj["lengths"] = {e["id"]: 1 for e in obj["edges"] if isinstance(e, dict)}
    return obj


def _divisor_arg(value: str, graph_obj: dict) -> dict:
    """JSON divisor, a bare coefficient map, or '2@a - 1@b' shorthand."""
    from . import serialize

    if value.lstrip().startswith("{") or value == "-" or os.path.exists(value):
        obj = _load_json_arg(value, "divisor")
        if isinstance(obj, dict) and "coeffs" not in obj:
            obj = {"coeffs": obj}  # accept {"c": 3} as shorthand for the map
        serialize.parse_divisor(obj)  # validate early
        return {k: v for k, v in obj.items() if k != "schema"}
    graph = serialize.parse_graph(graph_obj)
    return {"coeffs": serialize.parse_graph_divisor_shorthand(value, graph).coeffs()}


def _metric_divisor_arg(value: str, mg_obj: dict) -> list:
    from . import serialize

    if value.lstrip().startswith("[") or value == "-" or os.path.exists(value):
        obj = _load_json_arg(value, "metric divisor")
        if not isinstance(obj, list):
            raise ParseError("metric divisor must be a JSON array of terms")
        return obj
    mg = serialize.parse_metric_graph(mg_obj)
    return serialize.emit_metric_divisor(serialize.parse_divisor_shorthand(value, mg))


def _point_arg(value: str) -> dict:
    if ":" in value:
        edge, offset = value.split(":", 1)
        return {"edge": edge, "offset": offset}
    return {"vertex": value}


def _emit(ctx_obj: dict, payload: dict) -> None:
    if ctx_obj.get("human"):
        for line in _human_lines(payload):
            click.echo(line)
    else:
        click.echo(json.dumps(payload, sort_keys=True, default=str))


def _human_lines(payload, indent=0):
    pad = "  " * indent
    if isinstance(payload, dict):
        for key in sorted(payload):
            value = payload[key]
            if isinstance(value, (dict, list)) and value:
                yield f"{pad}{key}:"
                yield from _human_lines(value, indent + 1)
            else:
                yield f"{pad}{key}: {json.dumps(value, default=str)}"
    elif isinstance(payload, list):
        for item in payload:
            if isinstance(item, (dict, list)):
                yield from _human_lines(item, indent)
                yield f"{pad}-"
            else:
                yield f"{pad}- {json.dumps(item, default=str)}"
    else:
        yield f"{pad}{json.dumps(payload, default=str)}"


def _run(ctx, handler, model_cls, payload: dict) -> dict:
    server = ctx.obj.get("server")
    request = model_cls(**payload)
    if server:
        import httpx

        response = httpx.post(
            server.rstrip("/") + _ENDPOINTS[handler.__name__],
            json=json.loads(request.model_dump_json()),
            timeout=ctx.obj.get("timeout", 600.0),
        )
        if response.status_code == 400:
            raise ParseError(response.json().get("detail", "parse error"))
        if response.status_code >= 400:
            raise TropdegError(response.json().get("detail", response.text))
        return response.json()
    return handler(request)


def _dispatch(ctx, handler, model_cls, build_payload) -> None:
    """Build the request inside the guard so bad inputs also exit 3/2."""
    try:
        payload = build_payload() if callable(build_payload) else build_payload
        result = _run(ctx, handler, model_cls, payload)
    except ParseError as exc:
        click.echo(f"parse error: {exc}", err=True)
        ctx.exit(3)
    except TropdegError as exc:
        click.echo(f"error ({type(exc).__name__}): {exc}", err=True)
        ctx.exit(2)
    _emit(ctx.obj, result)


@click.group()
@click.option("--server", default=None, help="POST to a running service instead of running in-process.")
@click.option("--human", is_flag=True, help="Aligned text output instead of JSON.")
@click.option("--seed", type=int, default=0, help="Accepted for reproducibility; all computations are deterministic.")
@click.option("--jobs", type=int, default=1, help="Parallelism hint; output is canonical regardless.")
@click.pass_context
def main(ctx, server, human, seed, jobs):
    """Exact chip-firing and divisor-rank computations on finite and metric graphs."""
    ctx.ensure_object(dict)
    ctx.obj.update(server=server, human=human, seed=seed, jobs=jobs)


@main.command()
@click.option("--host", default="127.0.0.1")
@click.option("--port", default=8321, type=int)
def serve(host, port):
    """Run the HTTP service."""
    import uvicorn

    from .service import app

    uvicorn.run(app, host=host, port=port)


@main.command()
@click.option("--graph", required=True)
@click.option("--divisor", required=True)
@click.option("--at", "at", required=True)
@click.pass_context
def reduce(ctx, graph, divisor, at):
    """Unique at-reduced divisor in the class, with its firing vector."""
    def build():
        g = _load_json_arg(graph, "graph")
        return {"graph": g, "divisor": _divisor_arg(divisor, g), "at": at}
    _dispatch(ctx, handlers.graph_reduce, models.ReduceRequest, build)


@main.command()
@click.option("--graph", required=True)
@click.option("--divisor", required=True)
@click.pass_context
def rank(ctx, graph, divisor):
    """Baker-Norine rank of a divisor on a finite graph."""
    def build():
        g = _load_json_arg(graph, "graph")
        return {"graph": g, "divisor": _divisor_arg(divisor, g)}
    _dispatch(ctx, handlers.graph_rank, models.GraphDivisorRequest, build)


@main.command()
@click.option("--graph", required=True)
@click.option("--chain", default=None, help="Chain structure JSON; omitted means trivial.")
@click.option("--multidegree", required=True)
@click.option("--at", "at", required=True)
@click.pass_context
def concentrate(ctx, graph, chain, multidegree, at):
    """Canonical concentrated representative at a vertex."""
    def build():
        g = _load_json_arg(graph, "graph")
        return {
            "graph": g,
            "chain": _chain_arg(chain, g),
            "multidegree": _load_json_arg(multidegree, "multidegree"),
            "at": at,
        }
    _dispatch(ctx, handlers.chain_concentrate, models.ConcentrateRequest, build)


def _chain_arg(chain: Optional[str], graph_obj: dict) -> dict:
    if chain is None:
        return {"n": {}}
    obj = _load_json_arg(chain, "chain structure")
    return {k: v for k, v in obj.items() if k != "schema"}


@main.command()
@click.option("--graph", required=True)
@click.option("--chain", default=None)
@click.option("--multidegree", required=True)
@click.option("--vertex", required=True)
@click.option("--direction", type=int, default=1)
@click.pass_context
def twist(ctx, graph, chain, multidegree, vertex, direction):
    """Twist an admissible multidegree at a vertex (+1) or undo one (-1)."""
    def build():
        g = _load_json_arg(graph, "graph")
        return {
            "graph": g,
            "chain": _chain_arg(chain, g),
            "multidegree": _load_json_arg(multidegree, "multidegree"),
            "vertex": vertex,
            "direction": direction,
        }
    _dispatch(ctx, handlers.chain_twist, models.TwistRequest, build)


@main.command()
@click.option("--graph", required=True)
@click.option("--chain", default=None)
@click.option("--multidegree", required=True)
@click.option("--dot", is_flag=True, help="Emit the core as a DOT digraph.")
@click.pass_context
def barg(ctx, graph, chain, multidegree, dot):
    """Enumerate the finite twist core of a multidegree."""
    def build():
        g = _load_json_arg(graph, "graph")
        return {
            "graph": g,
            "chain": _chain_arg(chain, g),
            "multidegree": _load_json_arg(multidegree, "multidegree"),
        }
    if not dot:
        _dispatch(ctx, handlers.core_enumerate, models.CoreRequest, build)
        return
    try:
        result = _run(ctx, handlers.core_enumerate, models.CoreRequest, build())
    except ParseError as exc:
        click.echo(f"parse error: {exc}", err=True)
        ctx.exit(3)
    except TropdegError as exc:
        click.echo(f"error ({type(exc).__name__}): {exc}", err=True)
        ctx.exit(2)
    click.echo(result["dot"])


@main.command()
@click.option("--graph", required=True)
@click.option("--chain", default=None)
@click.option("--multidegree", required=True)
@click.option("--at", "at", required=True)
@click.pass_context
def dwv(ctx, graph, chain, multidegree, at):
    """Node-point divisor recording vanishing toward the concentrated member."""
    def build():
        g = _load_json_arg(graph, "graph")
        return {
            "graph": g,
            "chain": _chain_arg(chain, g),
            "multidegree": _load_json_arg(multidegree, "multidegree"),
            "at": at,
        }
    _dispatch(ctx, handlers.core_node_divisor, models.NodeDivisorRequest, build)


@main.command()
@click.option("--graph", required=True)
@click.option("--chain", default=None)
@click.option("--multidegree", required=True)
@click.option("--at", "at", required=True)
@click.pass_context
def riemann(ctx, graph, chain, multidegree, at):
    """Twist realizing the section-space dimension bound max(d+1-g, g)."""
    def build():
        g = _load_json_arg(graph, "graph")
        return {
            "graph": g,
            "chain": _chain_arg(chain, g),
            "multidegree": _load_json_arg(multidegree, "multidegree"),
            "at": at,
        }
    _dispatch(ctx, handlers.core_dimension_bound, models.DimensionBoundRequest, build)


@main.command(name="mg-rank")
@click.option("--metric-graph", default="-", help="Metric graph JSON, file, or '-' (stdin; fixture output accepted).")
@click.option("--divisor", required=True)
@click.option("--refine-check", is_flag=True)
@click.pass_context
def mg_rank(ctx, metric_graph, divisor, refine_check):
    """Rank of a divisor on a metric graph (exact, lattice-based)."""
    def build():
        mg = _metric_graph_arg(metric_graph)
        return {
            "metric_graph": mg,
            "divisor": _metric_divisor_arg(divisor, mg),
            "refine_check": refine_check,
        }
    _dispatch(ctx, handlers.metric_rank_handler, models.MetricRankRequest, build)


@main.command(name="mg-reduce")
@click.option("--metric-graph", default="-")
@click.option("--divisor", required=True)
@click.option("--at", "at", required=True, help="Vertex id or edge:offset.")
@click.pass_context
def mg_reduce(ctx, metric_graph, divisor, at):
    """Reduced representative at a point, with its PL witness."""
    def build():
        mg = _metric_graph_arg(metric_graph)
        return {
            "metric_graph": mg,
            "divisor": _metric_divisor_arg(divisor, mg),
            "at": _point_arg(at),
        }
    _dispatch(ctx, handlers.metric_reduce_handler, models.MetricReduceRequest, build)


@main.command()
@click.option("--metric-graph", default="-")
@click.option("--lattice", type=int, default=None)
@click.option("--d-max", type=int, default=4)
@click.option("--budget", type=int, default=2_000_000)
@click.pass_context
def gonality(ctx, metric_graph, lattice, d_max, budget):
    """Search the lattice for the smallest-degree rank-1 divisor."""
    _dispatch(ctx, handlers.bn_gonality, models.GonalityRequest, lambda: {
        "metric_graph": _metric_graph_arg(metric_graph),
        "lattice": lattice,
        "d_max": d_max,
        "budget": budget,
    })


@main.command(name="bn-rank")
@click.option("--metric-graph", default="-")
@click.option("--r", "r", type=int, required=True)
@click.option("--d", "d", type=int, required=True)
@click.option("--rho", "rho", type=int, required=True)
@click.option("--lattice", type=int, default=None)
@click.option("--budget", type=int, default=2_000_000)
@click.pass_context
def bn_rank(ctx, metric_graph, r, d, rho, lattice, budget):
    """Check the Brill-Noether rank bound w^r_d >= rho on a lattice."""
    _dispatch(ctx, handlers.bn_rank, models.BnRankRequest, lambda: {
        "metric_graph": _metric_graph_arg(metric_graph),
        "r": r, "d": d, "rho_prime": rho,
        "lattice": lattice, "budget": budget,
    })


@main.command()
@click.option("--metric-graph", "--graph", "metric_graph", default="-",
              help="Metric graph JSON; a plain graph is given unit lengths.")
@click.pass_context
def verdict(ctx, metric_graph):
    """Structural obstructions to Brill-Noether generality."""
    _dispatch(ctx, handlers.bn_verdict, models.VerdictRequest, lambda: {
        "metric_graph": _metric_graph_arg(metric_graph),
    })


@main.group()
def pct():
    """Multitree machinery: concentrated families, sequences, witnesses."""


@pct.command(name="multitree")
@click.option("--graph", required=True)
@click.pass_context
def pct_multitree(ctx, graph):
    """Whether the simple collapse is a tree."""
    _dispatch(ctx, handlers.pct_multitree, models.GraphOnlyRequest, lambda: {
        "graph": _load_json_arg(graph, "graph"),
    })


@pct.command(name="family")
@click.option("--graph", required=True)
@click.option("--chain", default=None)
@click.option("--multidegree", required=True)
@click.pass_context
def pct_family_cmd(ctx, graph, chain, multidegree):
    """Concentrated members at every vertex plus edge-side twist counts."""
    def build():
        g = _load_json_arg(graph, "graph")
        return {
            "graph": g,
            "chain": _chain_arg(chain, g),
            "multidegree": _load_json_arg(multidegree, "multidegree"),
        }
    _dispatch(ctx, handlers.pct_family_handler, models.PctFamilyRequest, build)


@pct.command(name="sequences")
@click.option("--graph", required=True)
@click.option("--chain", default=None)
@click.option("--multidegree", required=True)
@click.pass_context
def pct_sequences_cmd(ctx, graph, chain, multidegree):
    """Node-divisor sequences along edge-side twists."""
    def build():
        g = _load_json_arg(graph, "graph")
        return {
            "graph": g,
            "chain": _chain_arg(chain, g),
            "multidegree": _load_json_arg(multidegree, "multidegree"),
        }
    _dispatch(ctx, handlers.pct_sequences, models.PctFamilyRequest, build)


@pct.command(name="multivanishing")
@click.option("--degrees", required=True, help="JSON array of divisor degrees.")
@click.option("--dims", required=True, help="JSON array of vanishing-space dimensions.")
@click.pass_context
def pct_multivanishing_cmd(ctx, degrees, dims):
    """Multivanishing sequence from degrees and dimensions."""
    _dispatch(ctx, handlers.pct_multivanishing, models.MultivanishingRequest, lambda: {
        "degrees": json.loads(degrees),
        "dims": json.loads(dims),
    })


@pct.command(name="witness")
@click.option("--graph", required=True)
@click.option("--chain", default=None)
@click.option("--multidegree", required=True)
@click.option("--weights", required=True, help='JSON like {"v1": 1, "v2": 0}.')
@click.option("--profiles", required=True, help='JSON like {"(u~v,u)": [0, 2]}.')
@click.pass_context
def pct_witness_cmd(ctx, graph, chain, multidegree, weights, profiles):
    """Witness multidegree from vanishing profiles, with certificates."""
    def build():
        g = _load_json_arg(graph, "graph")
        return {
            "graph": g,
            "chain": _chain_arg(chain, g),
            "multidegree": _load_json_arg(multidegree, "multidegree"),
            "weights": json.loads(weights),
            "profiles": json.loads(profiles),
        }
    _dispatch(ctx, handlers.pct_witness_handler, models.PctWitnessRequest, build)


@main.command()
@click.argument("kind")
@click.option("--genus", type=int, default=None)
@click.option("--edge-length", default=None)
@click.option("--loops", type=int, default=None)
@click.option("--m", type=int, default=None)
@click.option("--part-genus", type=int, default=None)
@click.option("--out", type=click.Path(), default=None, help="Write files into this directory instead of stdout.")
@click.pass_context
def fixture(ctx, kind, genus, edge_length, loops, m, part_genus, out):
    """Emit a named fixture (flower, banana, chain_of_loops, wedge, path_join)."""
    params = {}
    if genus is not None:
        params["genus"] = genus
    if edge_length is not None:
        params["edge_length"] = edge_length
    if loops is not None:
        params["loops"] = loops
    if m is not None:
        params["m"] = m
    if part_genus is not None:
        params["part_genus"] = part_genus
    payload = {"kind": kind, "params": params}
    try:
        result = _run(ctx, handlers.fixture_handler, models.FixtureRequest, payload)
    except ParseError as exc:
        click.echo(f"parse error: {exc}", err=True)
        ctx.exit(3)
    except TropdegError as exc:
        click.echo(f"error ({type(exc).__name__}): {exc}", err=True)
        ctx.exit(2)
    if out:
        os.makedirs(out, exist_ok=True)
        path = os.path.join(out, f"{kind}.json")
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(result, fh, sort_keys=True, indent=2)
            fh.write("\n")
        readme = os.path.join(out, "README.txt")
        marked = ", ".join(f"{k}={v}" for k, v in sorted(result["marked"].items()))
        with open(readme, "a", encoding="utf-8") as fh:
            fh.write(
                f"{kind}.json: {result['kind']} fixture, "
                f"params {json.dumps(result['params'], sort_keys=True)}, "
                f"marked points: {marked}\n"
            )
        click.echo(path)
    else:
        _emit(ctx.obj, result)


if __name__ == "__main__":
    main()
