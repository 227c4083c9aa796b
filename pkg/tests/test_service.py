import pytest
from fastapi.testclient import TestClient

from tropdeg.service import create_app


@pytest.fixture(scope="module")
def client():
    return TestClient(create_app())


C3 = {
    "vertices": [{"id": "a"}, {"id": "b"}, {"id": "c"}],
    "edges": [
        {"id": "ab", "tail": "a", "head": "b"},
        {"id": "bc", "tail": "b", "head": "c"},
        {"id": "ca", "tail": "c", "head": "a"},
    ],
}

CIRCLE = {
    "vertices": [{"id": "a"}, {"id": "b"}],
    "edges": [
        {"id": "e1", "tail": "a", "head": "b"},
        {"id": "e2", "tail": "b", "head": "a"},
    ],
    "lengths": {"e1": 1, "e2": 1},
}


def test_health(client):
    r = client.get("/v1/health")
    assert r.status_code == 200
    assert r.json()["schema"] == "tropdeg/1"


def test_graph_reduce(client):
    r = client.post(
        "/v1/graph/reduce",
        json={"graph": C3, "divisor": {"coeffs": {"c": 3}}, "at": "a"},
    )
    assert r.status_code == 200
    body = r.json()
    assert body["reduced"]["coeffs"] == {"a": 3}
    assert body["twists"]["counts"] == {"b": 1, "c": 2}


def test_graph_rank_and_canonical(client):
    r = client.post("/v1/graph/rank", json={"graph": C3, "divisor": {"coeffs": {"a": 2}}})
    assert r.json()["rank"] == 1
    r = client.post("/v1/graph/canonical", json={"graph": C3})
    assert r.json()["divisor"]["coeffs"] == {}
    assert r.json()["genus"] == 1


def test_chain_concentrate(client):
    r = client.post(
        "/v1/chain/concentrate",
        json={
            "graph": C3,
            "chain": {"n": {}},
            "multidegree": {"w": {"c": 3}},
            "at": "a",
        },
    )
    body = r.json()
    assert body["multidegree"]["w"] == {"a": 3, "b": 0, "c": 0}


def test_core_enumerate(client):
    two = {
        "vertices": [{"id": "u"}, {"id": "v"}],
        "edges": [{"id": "e", "tail": "u", "head": "v"}],
    }
    r = client.post(
        "/v1/core/enumerate",
        json={"graph": two, "chain": {"n": {}}, "multidegree": {"w": {"u": 1}}},
    )
    members = r.json()["members"]
    assert len(members) == 2


def test_metric_rank(client):
    r = client.post(
        "/v1/metric/rank",
        json={
            "metric_graph": CIRCLE,
            "divisor": [{"vertex": "a", "coeff": 1}, {"vertex": "b", "coeff": 1}],
        },
    )
    assert r.json()["rank"] == 1


def test_metric_reduce_and_equiv(client):
    r = client.post(
        "/v1/metric/reduce",
        json={
            "metric_graph": CIRCLE,
            "divisor": [{"vertex": "b", "coeff": 2}],
            "at": {"vertex": "a"},
        },
    )
    body = r.json()
    assert body["reduced"] == [{"vertex": "a", "coeff": 2}]
    r = client.post(
        "/v1/metric/linear-equiv",
        json={
            "metric_graph": CIRCLE,
            "a": [{"vertex": "b", "coeff": 2}],
            "b": [{"vertex": "a", "coeff": 2}],
        },
    )
    assert r.json()["equivalent"] is True


def test_move_chips_roundtrip(client):
    line = {
        "vertices": [{"id": "u"}, {"id": "w"}],
        "edges": [{"id": "e", "tail": "u", "head": "w"}],
        "lengths": {"e": 3},
    }
    r = client.post(
        "/v1/metric/move-chips",
        json={
            "metric_graph": line,
            "divisor": [{"edge": "e", "offset": 1, "coeff": 1}],
            "values": {"u": 1, "w": 0},
        },
    )
    assert r.json()["divisor"] == [{"edge": "e", "offset": "2", "coeff": 1}]


def test_fixture_and_verdict(client):
    r = client.post("/v1/fixture", json={"kind": "flower", "params": {"genus": 5}})
    fixture = r.json()
    assert fixture["metric_graph"]["lengths"]["p1a"] == "1"
    r = client.post("/v1/bn/verdict", json={"metric_graph": fixture["metric_graph"]})
    assert "cannot be Brill-Noether general" in r.json()["verdict"]


def test_gonality_endpoint(client):
    r = client.post(
        "/v1/bn/gonality", json={"metric_graph": CIRCLE, "d_max": 2}
    )
    assert r.json()["found_degree"] == 2


def test_pct_endpoints(client):
    banana = {
        "vertices": [{"id": "v1"}, {"id": "v2"}],
        "edges": [
            {"id": "e1", "tail": "v1", "head": "v2"},
            {"id": "e2", "tail": "v1", "head": "v2"},
        ],
    }
    r = client.post("/v1/pct/multitree", json={"graph": banana})
    assert r.json()["is_multitree"] is True
    r = client.post(
        "/v1/pct/family",
        json={"graph": banana, "chain": {"n": {}}, "multidegree": {"w": {"v1": 2}}},
    )
    body = r.json()
    assert body["counts"] == {"(v1~v2,v1)": 1, "(v1~v2,v2)": 1}
    r = client.post(
        "/v1/pct/witness",
        json={
            "graph": banana,
            "chain": {"n": {}},
            "multidegree": {"w": {"v1": 2}},
            "weights": {"v1": 1, "v2": 0},
            "profiles": {"(v1~v2,v1)": [0, 2], "(v1~v2,v2)": [0, 2]},
        },
    )
    body = r.json()
    assert body["certificates"] == {
        "edge_side_counts": True,
        "codimension_sum": True,
        "core_membership": True,
    }
    assert body["t"] == {"(v1~v2,v1)": 0, "(v1~v2,v2)": 1}


def test_parse_error_is_400(client):
    r = client.post(
        "/v1/graph/rank",
        json={"graph": {"vertices": [], "edges": [], "bogus": 1}, "divisor": {"coeffs": {}}},
    )
    assert r.status_code == 400
    assert r.json()["error"] == "parse"


def test_domain_error_is_422(client):
    r = client.post(
        "/v1/graph/reduce",
        json={"graph": C3, "divisor": {"coeffs": {}}, "at": "zz"},
    )
    assert r.status_code == 422
    assert r.json()["error"] == "UnknownVertex"


def test_unknown_envelope_field_rejected(client):
    r = client.post(
        "/v1/graph/rank",
        json={"graph": C3, "divisor": {"coeffs": {}}, "surprise": 1},
    )
    assert r.status_code == 422  # pydantic extra="forbid"


def test_junk_bodies_never_500(client):
    cases = [
        ("/v1/graph/rank", {"graph": 3, "divisor": {"coeffs": {}}}),
        ("/v1/graph/rank", {"graph": {"vertices": 1, "edges": []}, "divisor": {"coeffs": {}}}),
        ("/v1/graph/rank", {"graph": {"vertices": [], "edges": []}, "divisor": "zz"}),
        ("/v1/metric/rank", {"metric_graph": {"vertices": [], "edges": [], "lengths": 0}, "divisor": []}),
        ("/v1/pct/witness", {"graph": {"vertices": [{"id": "a"}], "edges": []},
                             "chain": {"n": {}}, "multidegree": {"w": {}},
                             "weights": {}, "profiles": {"bad key": [0]}}),
    ]
    for path, body in cases:
        r = client.post(path, json=body)
        assert r.status_code in (400, 422), (path, r.status_code, r.text)


def test_join_witness_endpoint(client):
    triangle = {
        "vertices": [{"id": "a"}, {"id": "b"}, {"id": "c"}],
        "edges": [
            {"id": "ab", "tail": "a", "head": "b"},
            {"id": "bc", "tail": "b", "head": "c"},
            {"id": "ca", "tail": "c", "head": "a"},
        ],
        "lengths": {"ab": 1, "bc": 1, "ca": 1},
    }
    r = client.post(
        "/v1/bn/join-witness",
        json={
            "part1": {"metric_graph": triangle, "attach": "a"},
            "part2": {"metric_graph": triangle, "attach": "a"},
            "path_lengths": [1, 1, 1, 1],
        },
    )
    body = r.json()
    assert body["degree"] == 4
    assert body["verdict"].startswith("exception")
