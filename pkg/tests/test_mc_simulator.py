import math

import numpy as np
import pytest

from faultde.density_evolution import ChannelSpec, DEConfig, EnsembleSpec, run_de
from faultde.mc_simulator import (
    SimConfig,
    _trial_graph_seed,
    estimate_joint_s00,
    graph_to_adjacency_text,
    sample_graph,
    simulate_decode,
)
from faultde.message_code import FaultParams, MessageCodeSpec

ENS36 = EnsembleSpec(3, 6)
CODE2 = MessageCodeSpec(2, 1)


def _cfg(**kw):
    base = dict(
        ensemble=ENS36,
        num_vars=600,
        iterations=20,
        trials=3,
        seed=42,
        alpha=FaultParams(1e-3),
        epsilon=0.3,
        code=CODE2,
    )
    base.update(kw)
    return SimConfig(**base)


def test_sample_graph_small_bookkeeping():
    g = sample_graph(ENS36, 6, seed=7)
    assert g.num_checks == 3
    assert g.num_edges == 18
    assert np.all(np.bincount(g.edge_var) == 3)
    assert np.all(np.bincount(g.edge_check) == 6)


def test_sample_graph_deterministic():
    a = sample_graph(ENS36, 60, seed=123)
    b = sample_graph(ENS36, 60, seed=123)
    assert np.array_equal(a.edge_check, b.edge_check)
    c = sample_graph(ENS36, 60, seed=124)
    assert not np.array_equal(a.edge_check, c.edge_check)


def test_sample_graph_large_degree_histogram():
    g = sample_graph(ENS36, 10000, seed=1)
    assert np.all(np.bincount(g.edge_var, minlength=g.num_vars) == 3)
    assert np.all(np.bincount(g.edge_check, minlength=g.num_checks) == 6)


def test_sample_graph_divisibility():
    with pytest.raises(ValueError):
        sample_graph(ENS36, 7, seed=0)


def test_noiseless_channel_decodes_exactly():
    cfg = _cfg(alpha=FaultParams(0.0), epsilon=0.0)
    res = simulate_decode(sample_graph(ENS36, 600, 5), cfg)
    assert res.error_prob_mean == 0.0
    assert res.per_trial == (0.0, 0.0, 0.0)


def test_fault_free_run_never_sees_contradictions():
    cfg = _cfg(alpha=FaultParams(0.0), epsilon=0.45, iterations=30)
    res = simulate_decode(sample_graph(ENS36, 600, 5), cfg)
    assert res.contradiction_events == 0
    assert res.total_flips == 0


def test_simulation_deterministic():
    g = sample_graph(ENS36, 600, 5)
    a = simulate_decode(g, _cfg())
    b = simulate_decode(g, _cfg())
    assert a == b
    c = simulate_decode(g, _cfg(seed=43))
    assert a.per_trial != c.per_trial


def test_result_moments_consistent():
    res = simulate_decode(sample_graph(ENS36, 600, 5), _cfg(epsilon=0.5, trials=5))
    arr = np.asarray(res.per_trial)
    assert res.error_prob_mean == pytest.approx(float(arr.mean()), abs=1e-12)
    assert res.error_prob_stddev == pytest.approx(float(arr.std(ddof=1)), abs=1e-12)


def test_single_trial_has_zero_stddev():
    res = simulate_decode(sample_graph(ENS36, 600, 5), _cfg(trials=1))
    assert res.error_prob_stddev == 0.0


def test_regraph_logs_one_seed_per_trial():
    cfg = _cfg(regraph_per_trial=True, trials=4)
    res = simulate_decode(sample_graph(ENS36, 600, 5), cfg)
    assert len(res.graph_seed_log) == 4
    assert len(set(res.graph_seed_log)) == 4


def test_flip_rate_binomially_consistent():
    cfg = _cfg(num_vars=2000, iterations=20, trials=3, alpha=FaultParams(1e-3))
    res = simulate_decode(sample_graph(ENS36, 2000, 9), cfg)
    rate = res.total_flips / res.total_bits
    sigma = math.sqrt(1e-3 * (1 - 1e-3) / res.total_bits)
    assert abs(rate - 1e-3) <= 5 * sigma


def test_graph_config_mismatch_rejected():
    with pytest.raises(ValueError):
        simulate_decode(sample_graph(ENS36, 300, 5), _cfg(num_vars=600))


def test_mc_tracks_de_at_matched_iterations():
    cfg = _cfg(num_vars=4000, iterations=25, trials=5, epsilon=0.3)
    res = simulate_decode(sample_graph(ENS36, 4000, cfg.seed), cfg)
    de = run_de(
        ENS36, ChannelSpec(0.3), CODE2, FaultParams(1e-3), DEConfig(max_iters=25, fp_tol=1e-300)
    )
    tol = max(3 * res.error_prob_stddev / math.sqrt(cfg.trials), 0.01)
    assert abs(res.error_prob_mean - de.gamma) <= tol


def test_joint_estimate_perfect_conditions():
    cfg = _cfg(alpha=FaultParams(0.0), epsilon=0.0, trials=2)
    assert estimate_joint_s00(cfg) == 1.0


def test_joint_estimate_fault_free_equals_single_decoder():
    # with alpha=0 both decoders are deterministic and identical
    cfg = _cfg(alpha=FaultParams(0.0), epsilon=0.45, trials=3)
    joint = estimate_joint_s00(cfg)
    graph = sample_graph(ENS36, cfg.num_vars, _trial_graph_seed(cfg, 0))
    single = simulate_decode(graph, cfg)
    assert joint == pytest.approx(1.0 - single.error_prob_mean, abs=1e-12)


def test_joint_estimate_supports_correlation_assumption():
    cfg = _cfg(num_vars=3000, iterations=25, trials=4, epsilon=0.40)
    joint = estimate_joint_s00(cfg)
    graph = sample_graph(ENS36, cfg.num_vars, _trial_graph_seed(cfg, 0))
    single = simulate_decode(graph, cfg)
    s0 = 1.0 - single.error_prob_mean
    sigma = single.error_prob_stddev / math.sqrt(cfg.trials)
    assert joint >= s0 * s0 - 3 * sigma


def test_adjacency_text_format():
    g = sample_graph(ENS36, 6, seed=7)
    text = graph_to_adjacency_text(g)
    lines = text.splitlines()
    assert lines[0] == "6 3 3 6"
    assert len(lines) == 7
    neighbors = [int(x) for x in lines[1].split()]
    assert len(neighbors) == 3
    assert all(0 <= c < 3 for c in neighbors)
    # every check appears exactly dc times across the variable lines
    all_neighbors = [int(x) for line in lines[1:] for x in line.split()]
    assert np.all(np.bincount(all_neighbors, minlength=3) == 6)


def test_result_json_fields():
    res = simulate_decode(sample_graph(ENS36, 600, 5), _cfg())
    d = res.to_json_dict()
    assert set(d) == {
        "error_prob_mean",
        "error_prob_stddev",
        "per_trial",
        "graph_seed_log",
        "contradiction_events",
        "total_flips",
        "total_bits",
    }


@pytest.mark.parametrize(
    "kw",
    [
        dict(trials=0),
        dict(iterations=0),
        dict(epsilon=1.2),
        dict(seed=-1),
        dict(num_vars=601),
    ],
)
def test_invalid_sim_config(kw):
    with pytest.raises(ValueError):
        _cfg(**kw)
