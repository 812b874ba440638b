import numpy as np
import pytest
from fastapi.testclient import TestClient

from qqvqe.service.app import app

client = TestClient(app)

FAST_OPT = {"method": "cobyla", "ftol": 0.01, "max_evals": 100}


def test_healthz():
    r = client.get("/healthz")
    assert r.status_code == 200
    assert r.json() == {"status": "ok"}


def test_run_analytic_noiseless():
    r = client.post(
        "/run",
        json={"distance": 0.9, "mode": "analytic", "seed": 1, "optimizer": FAST_OPT},
    )
    assert r.status_code == 200
    body = r.json()
    assert body["n_evals"] == len(body["trace"]) <= 100
    assert body["oracle_e0"] == pytest.approx(-5.7252415, abs=1e-6)
    assert abs(body["final_energy"] - body["oracle_e0"]) < 0.05
    assert body["config"]["distance"] == 0.9
    assert body["gammas"] is None
    assert len(body["best_theta"]) == 6


def test_run_identical_seeds_identical_payloads():
    req = {"distance": 0.9, "mode": "sampled", "seed": 9, "optimizer": FAST_OPT,
           "noise": {"depolarizing_lambda": 0.2}, "qem": True,
           "gamma_source": "tomography"}
    a = client.post("/run", json=req)
    b = client.post("/run", json=req)
    assert a.status_code == b.status_code == 200
    assert a.content == b.content


def test_run_with_precomputed_gammas():
    tomo = client.post("/tomography", json={"noise": {"depolarizing_lambda": 0.2},
                                            "analytic": True})
    assert tomo.status_code == 200
    gammas = tomo.json()["gammas"]
    assert [g["setting"] for g in gammas] == ["ZZ", "ZX", "XZ", "XX"]
    r = client.post(
        "/run",
        json={"distance": 0.9, "mode": "analytic", "qem": True, "gammas": gammas,
              "noise": {"depolarizing_lambda": 0.2}, "optimizer": FAST_OPT},
    )
    assert r.status_code == 200
    assert abs(r.json()["final_energy"] - r.json()["oracle_e0"]) < 0.05


def test_tomography_identity_channel():
    r = client.post("/tomography", json={"analytic": True})
    assert r.status_code == 200
    for g in r.json()["gammas"]:
        entries = np.array(g["entries_column_major"]).reshape((4, 4), order="F")
        assert np.allclose(entries, np.eye(4), atol=1e-12)


def test_validation_errors():
    assert client.post("/run", json={"distance": -1.0}).status_code == 422
    assert client.post("/run", json={"distance": 0.33}).status_code == 400
    assert client.post("/run", json={"mode": "quantum"}).status_code == 422
    assert client.post(
        "/run", json={"noise": {"depolarizing_lambda": 0.2, "probs": [[1.0]]}}
    ).status_code == 422
    r = client.post("/noise-sweep", json={"lambdas": [1.0], "optimizer": FAST_OPT})
    assert r.status_code == 400


def test_curve_rows_sorted_and_complete():
    r = client.post(
        "/curve",
        json={"mode": "analytic", "optimizer": FAST_OPT,
              "distances": [1.1, 0.5, 0.9], "seed": 0},
    )
    assert r.status_code == 200
    rows = r.json()["rows"]
    assert [row["R"] for row in rows] == [0.5, 0.9, 1.1]
    for row in rows:
        assert abs(row["energy"] - row["oracle"]) < 0.05


def test_curve_defaults_to_full_table():
    r = client.post(
        "/curve",
        json={"mode": "analytic", "optimizer": {"method": "cobyla", "max_evals": 40}},
    )
    assert r.status_code == 200
    assert [row["R"] for row in r.json()["rows"]] == [
        0.05, 0.1, 0.2, 0.5, 0.7, 0.9, 1.1, 1.5, 2.0, 2.5,
    ]


def test_custom_table_inline():
    table = [{"R": 0.42, "II": -1.0, "IZ": -0.5, "ZI": -0.5, "ZZ": 0.1,
              "IX": -0.1, "ZX": 0.1, "XI": -0.1, "XZ": 0.1, "XX": 0.2}]
    r = client.post("/oracle", json=table)
    assert r.status_code == 200
    rows = r.json()["rows"]
    assert len(rows) == 1 and rows[0]["R"] == 0.42
    run = client.post("/run", json={"distance": 0.42, "mode": "analytic",
                                    "optimizer": FAST_OPT, "table": table})
    assert run.status_code == 200
    assert run.json()["oracle_e0"] == pytest.approx(rows[0]["oracle_e0"])


def test_oracle_reference_note():
    r = client.post("/oracle", params={"r": 0.9})
    assert r.status_code == 200
    body = r.json()
    assert body["published_reference_e0_r09"] == -2.863
    assert body["rows"][0]["oracle_e0"] == pytest.approx(-5.7252415, abs=1e-6)
    assert "inconsistent" in body["note"]


def test_sweep_smoke():
    r = client.post(
        "/noise-sweep",
        json={"mode": "sampled", "optimizer": FAST_OPT, "lambdas": [0.2],
              "tomography_repetitions": 2, "seed": 3, "qem": True,
              "gamma_source": "tomography"},
    )
    assert r.status_code == 200
    row = r.json()["rows"][0]
    assert row["lambda"] == 0.2
    assert row["lambda_std"] > 0.0
    assert row["E_mitigated"] < row["E_unmitigated"]


def test_bench_smoke():
    r = client.post(
        "/bench-optimizers",
        json={"mode": "analytic", "optimizer": FAST_OPT, "trials": 2,
              "methods": ["cobyla"], "seed": 1},
    )
    assert r.status_code == 200
    rows = r.json()["rows"]
    assert rows[0]["optimizer"] == "cobyla"
    assert rows[0]["P_S"] in (0.0, 0.5, 1.0)
    assert len(rows[0]["eval_counts"]) == 2
