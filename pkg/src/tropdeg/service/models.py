"""Request and response models for the HTTP API.

Nested mathematical objects (graphs, divisors, multidegrees, points) travel
as the JSON documents defined in tropdeg.serialize, which enforces the strict
field rules; the models here pin the request envelopes.
"""

from __future__ import annotations

from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict


class StrictModel(BaseModel):
    model_config = ConfigDict(extra="forbid")


class GraphDivisorRequest(StrictModel):
    graph: Dict[str, Any]
    divisor: Dict[str, Any]


class ReduceRequest(GraphDivisorRequest):
    at: str


class FireRequest(GraphDivisorRequest):
    vertex: str


class GraphOnlyRequest(StrictModel):
    graph: Dict[str, Any]


class LinearEquivRequest(StrictModel):
    graph: Dict[str, Any]
    a: Dict[str, Any]
    b: Dict[str, Any]


class ChainRequest(StrictModel):
    graph: Dict[str, Any]
    chain: Dict[str, Any]


class MultidegreeRequest(ChainRequest):
    multidegree: Dict[str, Any]


class TwistRequest(MultidegreeRequest):
    vertex: str
    direction: int = 1


class ConcentrateRequest(MultidegreeRequest):
    at: str


class TwistEquivRequest(ChainRequest):
    a: Dict[str, Any]
    b: Dict[str, Any]


class CoreRequest(MultidegreeRequest):
    pass


class NodeDivisorRequest(MultidegreeRequest):
    at: str


class DimensionBoundRequest(MultidegreeRequest):
    at: str


class MetricDivisorRequest(StrictModel):
    metric_graph: Dict[str, Any]
    divisor: List[Dict[str, Any]]


class MetricRankRequest(MetricDivisorRequest):
    refine_check: bool = False


class MetricReduceRequest(MetricDivisorRequest):
    at: Dict[str, Any]


class MetricEquivRequest(StrictModel):
    metric_graph: Dict[str, Any]
    a: List[Dict[str, Any]]
    b: List[Dict[str, Any]]


class MoveChipsRequest(MetricDivisorRequest):
    values: Dict[str, Any]


class DecomposeRequest(StrictModel):
    metric_graph: Dict[str, Any]
    a: List[Dict[str, Any]]
    b: List[Dict[str, Any]]
    function: Dict[str, Any]


class GonalityRequest(StrictModel):
    metric_graph: Dict[str, Any]
    lattice: Optional[int] = None
    d_max: int = 4
    budget: int = 2_000_000


class BnRankRequest(StrictModel):
    metric_graph: Dict[str, Any]
    r: int
    d: int
    rho_prime: int
    lattice: Optional[int] = None
    budget: int = 2_000_000


class VerdictRequest(StrictModel):
    metric_graph: Dict[str, Any]


class PartModel(StrictModel):
    metric_graph: Dict[str, Any]
    attach: str


class WedgeWitnessRequest(StrictModel):
    parts: List[PartModel]
    even_part_maximal: Optional[bool] = None


class JoinWitnessRequest(StrictModel):
    part1: PartModel
    part2: PartModel
    path_lengths: List[Any]


class W1ProbeJoinRequest(StrictModel):
    part1: PartModel
    part2: PartModel
    path_lengths: List[Any]
    grid1: List[Dict[str, Any]]
    grid2: List[Dict[str, Any]]


class W1ProbeWedgeRequest(StrictModel):
    parts: List[PartModel]
    even_index: int
    grid: List[Dict[str, Any]]


class PctFamilyRequest(MultidegreeRequest):
    pass


class MultivanishingRequest(StrictModel):
    degrees: List[int]
    dims: List[int]


class PctWitnessRequest(MultidegreeRequest):
    weights: Dict[str, int]
    profiles: Dict[str, List[int]]


class FixtureRequest(StrictModel):
    kind: str
    params: Dict[str, Any] = {}
