"""Monte Carlo oracle: fault erasure BP on sampled finite regular Tanner graphs.

Transmits the all-zero codeword over a BEC, then runs flooding BP in which
every stored message (check to variable, variable to check, and channel to
variable, fresh each iteration) passes through the encode / per-bit flip /
decode pipeline before being consumed.  The initial all-erasure check
messages are placeholders never written to flip-flops, so the first round
consumes them unfaulted, mirroring the density evolution schedule.
Variable nodes seeing both a 0 and a 1 emit an erasure; check nodes erase
on any erased input and otherwise emit the parity.  Estimates the error
probability that density evolution predicts in the infinite-length limit.

All randomness comes from counter-based Philox streams keyed by the run
seed and the trial index, so trials can execute in parallel while results
stay bit-identical to a serial run.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from .density_evolution import EnsembleSpec
from .message_code import FaultParams, MessageCodeSpec, MessageSymbol, encode

_ERASURE = int(MessageSymbol.ERASURE)

PER_TRIAL_CSV_HEADER = ("trial", "error_prob")

_GRAPH_STREAM = 1
_WORD_STREAM = 2
_FAULT_STREAM_A = 3
_FAULT_STREAM_B = 4


@dataclass(frozen=True, eq=False)
class TannerGraph:
    """(dv, dc)-regular bipartite graph with port-ordered edge arrays.

    Edge e in variable-port order belongs to variable e // dv; check_order
    permutes edges into check-port order (edge check_order[j] is port
    j % dc of check j // dc).  Multi-edges are allowed (configuration
    model).
    """

    num_vars: int
    num_checks: int
    dv: int
    dc: int
    edge_var: np.ndarray
    edge_check: np.ndarray
    check_order: np.ndarray

    def __post_init__(self) -> None:
        num_edges = self.num_vars * self.dv
        if num_edges != self.num_checks * self.dc:
            raise ValueError("edge count mismatch between variable and check sides")
        if self.edge_var.shape != (num_edges,) or self.edge_check.shape != (num_edges,):
            raise ValueError("edge arrays have wrong length")

    @property
    def num_edges(self) -> int:
        return self.num_vars * self.dv


def sample_graph(ens: EnsembleSpec, num_vars: int, seed: int) -> TannerGraph:
    """Uniform configuration-model pairing of variable ports to check ports."""
    num_edges = num_vars * ens.dv
    if num_edges % ens.dc != 0:
        raise ValueError(
            f"num_vars*dv = {num_edges} is not divisible by dc = {ens.dc}; "
            f"no regular check side exists"
        )
    num_checks = num_edges // ens.dc
    rng = np.random.default_rng(seed)
    perm = rng.permutation(num_edges)
    edge_var = np.arange(num_edges, dtype=np.int64) // ens.dv
    edge_check = perm // ens.dc
    check_order = np.argsort(edge_check, kind="stable")
    return TannerGraph(
        num_vars=num_vars,
        num_checks=num_checks,
        dv=ens.dv,
        dc=ens.dc,
        edge_var=edge_var,
        edge_check=edge_check,
        check_order=check_order,
    )


def graph_to_adjacency_text(graph: TannerGraph) -> str:
    """Adjacency export: header line, then one line of check neighbors per variable."""
    lines = [f"{graph.num_vars} {graph.num_checks} {graph.dv} {graph.dc}"]
    ec = graph.edge_check
    for v in range(graph.num_vars):
        lines.append(" ".join(str(c) for c in ec[v * graph.dv : (v + 1) * graph.dv]))
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class SimConfig:
    """Parameters of one Monte Carlo run.

    The ensemble rides along so the config is self-contained (graph
    resampling and the joint-estimate probe both need the degrees).
    """

    ensemble: EnsembleSpec
    num_vars: int
    iterations: int
    trials: int
    seed: int
    alpha: FaultParams
    epsilon: float
    code: MessageCodeSpec
    regraph_per_trial: bool = False

    def __post_init__(self) -> None:
        if (self.num_vars * self.ensemble.dv) % self.ensemble.dc != 0:
            raise ValueError("num_vars*dv must be divisible by dc")
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if self.iterations < 1:
            raise ValueError(f"iterations must be >= 1, got {self.iterations}")
        if not 0.0 <= self.epsilon <= 1.0:
            raise ValueError(f"epsilon must lie in [0, 1], got {self.epsilon}")
        if not 0 <= self.seed < 2**64:
            raise ValueError(f"seed must be an unsigned 64-bit integer, got {self.seed}")


@dataclass(frozen=True)
class SimResult:
    error_prob_mean: float
    error_prob_stddev: float
    per_trial: tuple[float, ...]
    graph_seed_log: tuple[int, ...]
    contradiction_events: int
    total_flips: int
    total_bits: int

    def to_json_dict(self) -> dict:
        return {
            "error_prob_mean": self.error_prob_mean,
            "error_prob_stddev": self.error_prob_stddev,
            "per_trial": list(self.per_trial),
            "graph_seed_log": list(self.graph_seed_log),
            "contradiction_events": self.contradiction_events,
            "total_flips": self.total_flips,
            "total_bits": self.total_bits,
        }


@dataclass
class _FaultStats:
    flips: int = 0
    bits: int = 0
    contradictions: int = 0


def _code_tables(code: MessageCodeSpec) -> tuple[np.ndarray, np.ndarray]:
    phi = np.stack(
        [np.array(encode(sym, code), dtype=np.uint8) for sym in MessageSymbol]
    )
    weights = np.arange(code.n + 1)
    dec = np.full(code.n + 1, _ERASURE, dtype=np.int8)
    dec[weights <= code.k - 1] = 0
    dec[weights >= code.n - code.k + 1] = 1
    return phi, dec


def _corrupt(
    symbols: np.ndarray,
    alpha: float,
    phi: np.ndarray,
    dec: np.ndarray,
    rng: np.random.Generator,
    stats: _FaultStats,
) -> np.ndarray:
    """Encode each symbol, flip stored bits independently, decode the read-out."""
    bits = phi[symbols]
    flips = rng.random(bits.shape) < alpha
    stats.flips += int(flips.sum())
    stats.bits += flips.size
    weights = (bits ^ flips).sum(axis=-1)
    return dec[weights]


def _resolve(zeros: np.ndarray, ones: np.ndarray, stats: _FaultStats) -> np.ndarray:
    """Variable rule on counts: contradictions and all-erasure give e."""
    contradiction = (zeros > 0) & (ones > 0)
    stats.contradictions += int(contradiction.sum())
    out = np.where(
        contradiction,
        _ERASURE,
        np.where(zeros > 0, 0, np.where(ones > 0, 1, _ERASURE)),
    )
    return out.astype(np.int8)


def _decode_once(
    graph: TannerGraph,
    received: np.ndarray,
    cfg: SimConfig,
    rng: np.random.Generator,
    stats: _FaultStats,
) -> np.ndarray:
    """Run `cfg.iterations` flooding rounds; return the tentative estimates."""
    phi, dec = _code_tables(cfg.code)
    alpha = cfg.alpha.alpha
    dv, dc = graph.dv, graph.dc
    num_vars, num_checks = graph.num_vars, graph.num_checks
    edge_var, check_order = graph.edge_var, graph.check_order

    check_to_var = np.full(graph.num_edges, _ERASURE, dtype=np.int8)
    estimates = np.full(num_vars, _ERASURE, dtype=np.int8)

    for iteration in range(cfg.iterations):
        if iteration == 0:
            # nothing has been written to the check-to-variable flip-flops
            # yet; the initial erasure placeholders are consumed as-is
            cv = check_to_var
        else:
            cv = _corrupt(check_to_var, alpha, phi, dec, rng, stats)
        ch = _corrupt(received, alpha, phi, dec, rng, stats)
        zeros = (cv == 0).reshape(num_vars, dv).sum(axis=1) + (ch == 0)
        ones = (cv == 1).reshape(num_vars, dv).sum(axis=1) + (ch == 1)
        estimates = _resolve(zeros, ones, stats)
        vc = _resolve(
            zeros[edge_var] - (cv == 0),
            ones[edge_var] - (cv == 1),
            stats,
        )
        vcc = _corrupt(vc, alpha, phi, dec, rng, stats)
        incoming = vcc[check_order].reshape(num_checks, dc)
        is_e = incoming == _ERASURE
        erased_others = is_e.sum(axis=1, keepdims=True) - is_e
        bits = np.where(is_e, 0, incoming)
        parity = np.bitwise_xor.reduce(bits, axis=1, keepdims=True)
        out = np.where(erased_others > 0, _ERASURE, parity ^ bits)
        check_to_var[check_order] = out.ravel().astype(np.int8)

    return estimates


def _trial_graph_seed(cfg: SimConfig, trial: int) -> int:
    return int(np.random.SeedSequence((cfg.seed, trial, _GRAPH_STREAM)).generate_state(1)[0])


def _stream(cfg: SimConfig, trial: int, stream: int) -> np.random.Generator:
    return np.random.Generator(
        np.random.Philox(seed=np.random.SeedSequence((cfg.seed, trial, stream)))
    )


def _sample_received(cfg: SimConfig, trial: int) -> np.ndarray:
    rng = _stream(cfg, trial, _WORD_STREAM)
    erased = rng.random(cfg.num_vars) < cfg.epsilon
    return np.where(erased, _ERASURE, 0).astype(np.int8)


def _summarize(per_trial: list[float], graph_seeds: list[int], stats: _FaultStats) -> SimResult:
    arr = np.asarray(per_trial)
    stddev = float(arr.std(ddof=1)) if len(per_trial) > 1 else 0.0
    return SimResult(
        error_prob_mean=float(arr.mean()),
        error_prob_stddev=stddev,
        per_trial=tuple(per_trial),
        graph_seed_log=tuple(graph_seeds),
        contradiction_events=stats.contradictions,
        total_flips=stats.flips,
        total_bits=stats.bits,
    )


def simulate_decode(graph: TannerGraph, cfg: SimConfig) -> SimResult:
    """Estimate the post-decoding error probability over cfg.trials trials.

    A trial's error probability is the fraction of variables whose
    tentative estimate differs from the transmitted 0 after the last
    iteration.  With regraph_per_trial each trial decodes on a freshly
    sampled graph (seeds logged); otherwise all trials share `graph`.
    """
    if graph.num_vars != cfg.num_vars or graph.dv != cfg.ensemble.dv or graph.dc != cfg.ensemble.dc:
        raise ValueError("graph shape does not match the simulation config")
    stats = _FaultStats()
    per_trial: list[float] = []
    graph_seeds: list[int] = []
    for trial in range(cfg.trials):
        g = graph
        if cfg.regraph_per_trial:
            gseed = _trial_graph_seed(cfg, trial)
            graph_seeds.append(gseed)
            g = sample_graph(cfg.ensemble, cfg.num_vars, gseed)
        received = _sample_received(cfg, trial)
        rng = _stream(cfg, trial, _FAULT_STREAM_A)
        estimates = _decode_once(g, received, cfg, rng, stats)
        per_trial.append(float(np.mean(estimates != 0)))
    return _summarize(per_trial, graph_seeds, stats)


def estimate_joint_s00(cfg: SimConfig) -> float:
    """Empirical probability that two independent-fault decoders both estimate 0.

    Both decoders see the same graph and received word but draw their fault
    flips from independent streams; probes the positive-correlation
    assumption behind the majority-voting bound.
    """
    stats = _FaultStats()
    base_graph: Optional[TannerGraph] = None
    if not cfg.regraph_per_trial:
        base_graph = sample_graph(cfg.ensemble, cfg.num_vars, _trial_graph_seed(cfg, 0))
    acc = 0.0
    for trial in range(cfg.trials):
        if base_graph is not None:
            g = base_graph
        else:
            g = sample_graph(cfg.ensemble, cfg.num_vars, _trial_graph_seed(cfg, trial))
        received = _sample_received(cfg, trial)
        est_a = _decode_once(g, received, cfg, _stream(cfg, trial, _FAULT_STREAM_A), stats)
        est_b = _decode_once(g, received, cfg, _stream(cfg, trial, _FAULT_STREAM_B), stats)
        acc += float(np.mean((est_a == 0) & (est_b == 0)))
    return acc / cfg.trials


def write_per_trial_csv(result: SimResult, path: str | Path) -> None:
    from .serialization import fmt, write_csv

    rows = ((str(i), fmt(p)) for i, p in enumerate(result.per_trial))
    write_csv(path, PER_TRIAL_CSV_HEADER, rows)
