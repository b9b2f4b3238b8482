"""HTTP service endpoint tests."""

import pytest
from fastapi.testclient import TestClient

from lipcube.service import app

client = TestClient(app)

RECT = {"a": 0.0, "b": 1.0, "c": 0.0, "d": 1.0}


def test_healthz():
    resp = client.get("/healthz")
    assert resp.status_code == 200
    assert resp.json()["status"] == "ok"


def test_builtins_listing():
    resp = client.get("/v1/builtins")
    assert resp.status_code == 200
    body = resp.json()
    assert body["cone"] == "abs(x-0.5)+abs(y-0.5)"
    assert set(body) == {"linear", "cone", "sincos", "prodconvex", "wiggle"}


def test_bounds_endpoint():
    resp = client.post("/v1/bounds", json={"rect": RECT, "lip": [1, 1]})
    assert resp.status_code == 200
    body = resp.json()
    assert body["m1"] == 4.0 and body["m2"] == 4.0
    assert body["midpoint_mean_bound"] == 0.5
    assert body["corner_midpoint_bound"] == 1.0
    assert body["corner_mean_bound"] == pytest.approx(2.0 / 3.0, rel=1e-15)
    assert body["h_modulus_t"] == 0.25


def test_bounds_eight_point():
    resp = client.post("/v1/bounds",
                       json={"rect": RECT, "lip": [1, 2, 3, 4, 5, 6, 7, 8]})
    assert resp.status_code == 200
    body = resp.json()
    assert body["m1"] == 16.0 and body["m2"] == 20.0
    assert body["h_modulus_t"] is None


def test_integrate_manual_constants():
    resp = client.post("/v1/integrate", json={
        "builtin": "cone", "rect": RECT, "tol": 1e-2,
        "lip_mode": "manual", "lip": [1, 1]})
    assert resp.status_code == 200
    body = resp.json()
    assert body["converged"]
    assert body["error_bound"] <= 1e-2
    assert abs(body["estimate"] - 0.5) <= body["error_bound"]
    assert body["lipschitz"]["mode"] == "manual"
    assert body["note"] is None


def test_integrate_certified_mode():
    resp = client.post("/v1/integrate", json={
        "expr": "abs(x-0.5)+abs(y-0.5)", "rect": RECT, "tol": 2e-2,
        "lip_mode": "certified"})
    assert resp.status_code == 200
    body = resp.json()
    assert body["lipschitz"]["certified"]
    assert body["lipschitz"]["l1"] == pytest.approx(1.0, abs=1e-9)


def test_integrate_sampled_mode_is_labeled():
    resp = client.post("/v1/integrate", json={
        "builtin": "sincos", "rect": RECT, "tol": 5e-2,
        "lip_mode": "sampled", "samples": 2000})
    assert resp.status_code == 200
    body = resp.json()
    assert not body["lipschitz"]["certified"]
    assert "UNCERTIFIED" in body["note"]


def test_integrate_singularity_maps_to_422():
    resp = client.post("/v1/integrate", json={
        "expr": "1/x", "rect": {"a": -1, "b": 1, "c": 0, "d": 1},
        "tol": 1e-2, "lip_mode": "certified"})
    assert resp.status_code == 422
    assert resp.json()["error"] == "singularity"


def test_parse_error_maps_to_400():
    resp = client.post("/v1/integrate", json={
        "expr": "x +", "rect": RECT, "tol": 1e-2, "lip_mode": "certified"})
    assert resp.status_code == 400
    body = resp.json()
    assert body["error"] == "parse"
    assert body["position"] == 3


def test_unknown_builtin_maps_to_400():
    resp = client.post("/v1/integrate", json={
        "builtin": "nosuch", "rect": RECT, "tol": 1e-2,
        "lip_mode": "certified"})
    assert resp.status_code == 400
    assert resp.json()["error"] == "unknown-builtin"


def test_request_validation_is_422():
    # both expr and builtin
    resp = client.post("/v1/integrate", json={
        "expr": "x", "builtin": "cone", "rect": RECT, "tol": 1e-2})
    assert resp.status_code == 422
    # manual mode without constants
    resp = client.post("/v1/integrate", json={
        "builtin": "cone", "rect": RECT, "tol": 1e-2, "lip_mode": "manual"})
    assert resp.status_code == 422
    # unordered rectangle
    resp = client.post("/v1/bounds", json={
        "rect": {"a": 1, "b": 0, "c": 0, "d": 1}, "lip": [1, 1]})
    assert resp.status_code == 422
    # nonpositive tolerance
    resp = client.post("/v1/integrate", json={
        "builtin": "cone", "rect": RECT, "tol": 0.0, "lip_mode": "certified"})
    assert resp.status_code == 422


def test_lipschitz_endpoint_modes():
    resp = client.post("/v1/lipschitz", json={
        "builtin": "sincos", "rect": RECT, "mode": "both", "samples": 2000})
    assert resp.status_code == 200
    body = resp.json()
    assert body["certified"]["l1"] >= body["sampled"]["l1"]
    assert body["certified"]["l2"] >= body["sampled"]["l2"]
    assert "UNCERTIFIED" in body["note"]


def test_verify_endpoint_deterministic():
    req = {"seed": 7, "lipschitz_trials": 4, "chain_trials": 2,
           "h_functions": 1, "oned_trials": 2, "convexity_samples": 300}
    r1 = client.post("/v1/verify", json=req)
    r2 = client.post("/v1/verify", json=req)
    assert r1.status_code == 200
    assert r1.content == r2.content
    body = r1.json()
    assert body["violations"] == 0
    assert body["seed"] == 7
    assert len(body["cases"]) > 50


def test_hmap_endpoint():
    resp = client.post("/v1/hmap", json={
        "builtin": "cone", "rect": RECT, "grid": 5, "n": 64,
        "lip_mode": "manual", "lip": [1, 1]})
    assert resp.status_code == 200
    body = resp.json()
    assert len(body["rows"]) == 25
    first, last = body["rows"][0], body["rows"][-1]
    assert (first["t"], first["s"]) == (0.0, 0.0)
    assert first["eq9_lhs"] is None
    assert first["eq6_lhs"] == 0.0  # H(0,0) is exactly the midpoint value
    assert last["eq7_lhs"] == 0.0   # H(1,1) is exactly the mean
    for row in body["rows"]:
        assert row["eq6_lhs"] <= row["eq6_rhs"] + 1e-8
        assert row["eq7_lhs"] <= row["eq7_rhs"] + 1e-8
        assert row["eq10_lhs"] <= row["eq10_rhs"] + 1e-8
    # the extra-factor variant undercuts the attained gap somewhere
    assert any(row["eq10_rhs_alt"] < row["eq10_lhs"] - 1e-8
               for row in body["rows"])


def test_hmap_rejects_odd_n_and_eight_point():
    resp = client.post("/v1/hmap", json={
        "builtin": "cone", "rect": RECT, "n": 63,
        "lip_mode": "manual", "lip": [1, 1]})
    assert resp.status_code == 422
    resp = client.post("/v1/hmap", json={
        "builtin": "cone", "rect": RECT,
        "lip_mode": "manual", "lip": [1, 1, 1, 1, 1, 1, 1, 1]})
    assert resp.status_code == 422
