import pytest

import cobe

BANDIT = {
    "schema_version": 1,
    "family": "bandit",
    "K": 3,
    "gap": 0.3,
    "adversary": "flip",
    "budget": 20,
    "algorithm": "cobe",
    "base": "pe",
    "T": 500,
}


def test_lowerbound_exact():
    r = cobe.lowerbound(100, 10000)
    assert r["regret"] == 2178.0
    assert r["matches_closed_form"]
    signs = cobe.lower_bound_signs(100, 10000)
    assert signs[0] == 1 and all(s == -1 for s in signs[1:])


def test_run_seed_is_reproducible():
    a = cobe.run_seed(BANDIT, seed=3, with_trace=True)
    b = cobe.run_seed(BANDIT, seed=3, with_trace=True)
    assert a["trace"] == b["trace"]
    assert a["checkpoints"][-1] == (500, a["final_regret"])
    assert a["C_a"] > 0


def test_run_many_seeds():
    cfg = dict(BANDIT, seeds=3)
    rs = cobe.run(cfg, jobs=2)
    assert [r["seed"] for r in rs] == [0, 1, 2]


def test_config_defaults_and_errors():
    full = cobe.config({"schema_version": 1})
    assert full["family"] == "bandit"
    with pytest.raises(cobe.ConfigError):
        cobe.config({"schema_version": 1, "horizon": 5})
    with pytest.raises(ValueError):
        cobe.run_seed({"schema_version": 1, "family": "bandit", "base": "ucbvi"})


def test_weights():
    assert cobe.cobe_alpha(1, 3) == [0.625, 0.25, 0.125]
    assert abs(sum(cobe.gcobe_alpha(0, 6, 1e4, 10.0, 2.0)) - 1.0) < 1e-12
    assert cobe.quantile([1.0, 2.0, 3.0], 0.5) == 2.0
