import json

import pytest

import primo

TINY_CONFIG = {
    "seed": 3,
    "horizon": 128,
    "replications": 2,
    "workers": 1,
    "elasticity_samples": 1000,
    "environment": {
        "d_x": 2,
        "num_actions": 3,
        "missingness": {"mode": "mcar", "p": 0.5},
    },
    "algorithms": [{"name": "primo"}, {"name": "uniform"}],
}


def test_igw_probabilities():
    probs = primo.igw_probabilities([1.0, 0.5], 10.0)
    assert probs[0] == pytest.approx(6.0 / 7.0, abs=1e-12)
    assert probs[1] == pytest.approx(1.0 / 7.0, abs=1e-12)
    assert sum(probs) == pytest.approx(1.0, abs=1e-12)


def test_schedule_helpers():
    assert primo.gamma_practical(4, c=1.0, rho=0.5, num_actions=4) == pytest.approx(8.0)
    assert primo.log_guard(8.0, 1.0) == pytest.approx(5.0)
    assert primo.radius_rate("linear", 4.0, 400.0) == pytest.approx(0.1)
    assert primo.covering_rate(1.0, 2.0, 16.0) == pytest.approx(0.5)


def test_validate_config_reports_errors():
    errors = primo.validate_config(json.dumps({"horizon": 1}))
    assert errors
    assert any("horizon" in e for e in errors)
    assert primo.validate_config(json.dumps(TINY_CONFIG)) == []


def test_bad_config_raises():
    with pytest.raises(ValueError):
        primo.run_config(json.dumps({"horizon": 1}))


def test_estimate_constants():
    out = primo.estimate_constants(json.dumps(TINY_CONFIG))
    assert set(out) >= {"elasticity", "upsilon", "samples"}
    assert out["elasticity"] >= 0.0


def test_run_config_summary_and_traces():
    out = primo.run_config(json.dumps(TINY_CONFIG))
    summary = out["summary"]
    assert summary["horizon"] == 128
    assert summary["replications"] == 2
    assert len(summary["algorithms"]) == 2
    assert summary["algorithms"][0]["tag"] == "primo"
    assert "traces" not in out

    out = primo.run_config(json.dumps(TINY_CONFIG), include_traces=True)
    traces = out["traces"]
    assert set(traces) == {"primo", "uniform"}
    lines = traces["primo"].splitlines()
    assert lines[0] == "replication,round,epoch,algo,gamma,instant_regret,cum_regret,missing"
    assert len(lines) == 1 + 2 * 128
