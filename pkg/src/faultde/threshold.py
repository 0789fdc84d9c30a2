"""Fault BP threshold search, error-probability curves, and DE trajectories.

The asymptotic error probability gamma(eps, alpha) jumps between a
low-error and a high-error branch at the fault BP threshold.  The search
bisects on eps, classifying each probe against the geometric mean of the
current bracket endpoints' gamma values; the two branches differ by orders
of magnitude, so a multiplicative midpoint separates them robustly across
fault rates.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Optional, Sequence

from .density_evolution import ChannelSpec, DEConfig, EnsembleSpec, run_de
from .message_code import FaultParams, MessageCodeSpec
from .serialization import fmt, write_csv

GAMMA_FLOOR = 1e-300
# endpoints must differ by this factor to count as straddling a jump
BRACKET_FACTOR = 10.0
# the jump shrinks with alpha (ratio ~3.4 at alpha=1e-2), so the no-jump
# flag uses a looser factor than bracket validation
JUMP_FACTOR = 2.0
THRESHOLD_MAX_ITERS = 2_000_000

CURVE_CSV_HEADER = ("epsilon", "gamma", "converged", "iterations")
TRAJECTORY_FIELD_CSV_HEADER = ("epsilon", "iter", "p0", "p1")


class BracketError(ValueError):
    """Both bracket endpoints lie on the same branch of the error curve."""


@dataclass(frozen=True)
class CurvePoint:
    epsilon: float
    gamma: float
    converged: bool
    iterations: int


@dataclass(frozen=True)
class ThresholdResult:
    epsilon_star: float
    bracket_low: float
    bracket_high: float
    gamma_below: float
    gamma_above: float
    bisection_steps: int
    no_jump: bool
    all_converged: bool

    def to_json_dict(self) -> dict:
        return {
            "epsilon_star": self.epsilon_star,
            "bracket_low": self.bracket_low,
            "bracket_high": self.bracket_high,
            "gamma_below": self.gamma_below,
            "gamma_above": self.gamma_above,
            "bisection_steps": self.bisection_steps,
            "no_jump": self.no_jump,
            "all_converged": self.all_converged,
        }


def _validate_grid(eps_grid: Sequence[float]) -> None:
    if len(eps_grid) == 0:
        raise ValueError("epsilon grid is empty")
    for e in eps_grid:
        if not 0.0 <= e <= 1.0:
            raise ValueError(f"grid epsilon {e} outside [0, 1]")
    for a, b in zip(eps_grid, eps_grid[1:]):
        if not a < b:
            raise ValueError("epsilon grid must be strictly increasing")


def _curve_worker(args) -> CurvePoint:
    ens, fp, spec, cfg, eps = args
    res = run_de(ens, ChannelSpec(eps), spec, fp, cfg)
    return CurvePoint(eps, res.gamma, res.converged, res.iterations)


def sweep_curve(
    ens: EnsembleSpec,
    fp: FaultParams,
    spec: MessageCodeSpec,
    eps_grid: Sequence[float],
    cfg: Optional[DEConfig] = None,
    jobs: int = 1,
) -> list[CurvePoint]:
    """Evaluate gamma on a strictly increasing epsilon grid, in grid order.

    Grid points are independent DE runs; jobs > 1 fans them out to a
    process pool with results merged back in grid order.
    """
    _validate_grid(eps_grid)
    if cfg is None:
        cfg = DEConfig()
    tasks = [(ens, fp, spec, cfg, eps) for eps in eps_grid]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_curve_worker, tasks))
    return [_curve_worker(t) for t in tasks]


def find_threshold(
    ens: EnsembleSpec,
    fp: FaultParams,
    spec: MessageCodeSpec,
    eps_lo: float,
    eps_hi: float,
    tol: float,
    cfg: Optional[DEConfig] = None,
) -> ThresholdResult:
    """Bisect for the jump in gamma(eps) between eps_lo and eps_hi.

    Endpoints must straddle the jump: gamma at eps_hi has to exceed gamma
    at eps_lo by more than BRACKET_FACTOR, otherwise BracketError.  Probes are
    classified high-branch when their gamma exceeds the geometric mean of
    the bracket endpoints' gammas (floored at 1e-300 for the log).  If the
    final bracket shows no order-of-magnitude separation the result is
    flagged no_jump rather than reported as a genuine threshold.
    """
    if not 0.0 <= eps_lo < eps_hi <= 1.0:
        raise ValueError(f"invalid bracket [{eps_lo}, {eps_hi}]")
    if not tol > 0.0:
        raise ValueError(f"tolerance must be positive, got {tol}")
    if cfg is None:
        cfg = DEConfig(max_iters=THRESHOLD_MAX_ITERS)

    all_converged = True

    def probe(eps: float) -> float:
        nonlocal all_converged
        res = run_de(ens, ChannelSpec(eps), spec, fp, cfg)
        all_converged = all_converged and res.converged
        return max(res.gamma, GAMMA_FLOOR)

    lo, hi = eps_lo, eps_hi
    g_lo = probe(lo)
    g_hi = probe(hi)
    if g_hi <= BRACKET_FACTOR * g_lo:
        raise BracketError(
            f"gamma({eps_lo})={g_lo:.3g} and gamma({eps_hi})={g_hi:.3g} "
            f"do not straddle a jump; pick endpoints on opposite branches"
        )

    steps = 0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        g_mid = probe(mid)
        split = math.exp(0.5 * (math.log(g_lo) + math.log(g_hi)))
        if g_mid > split:
            hi, g_hi = mid, g_mid
        else:
            lo, g_lo = mid, g_mid
        steps += 1

    return ThresholdResult(
        epsilon_star=0.5 * (lo + hi),
        bracket_low=lo,
        bracket_high=hi,
        gamma_below=g_lo,
        gamma_above=g_hi,
        bisection_steps=steps,
        no_jump=g_hi < JUMP_FACTOR * g_lo,
        all_converged=all_converged,
    )


def trajectory_field(
    ens: EnsembleSpec,
    fp: FaultParams,
    spec: MessageCodeSpec,
    eps_grid: Sequence[float],
    cfg: Optional[DEConfig] = None,
) -> list[tuple[float, list[tuple[float, float]]]]:
    """Per-epsilon sequences of (p(0), p(1)) across iterations, for arrow plots."""
    _validate_grid(eps_grid)
    if cfg is None:
        cfg = DEConfig()
    cfg = replace(cfg, record_trajectory=True)
    field = []
    for eps in eps_grid:
        res = run_de(ens, ChannelSpec(eps), spec, fp, cfg)
        assert res.trajectory is not None
        field.append((eps, [(row.p.p0, row.p.p1) for row in res.trajectory]))
    return field


def write_curve_csv(points: Sequence[CurvePoint], path: str | Path) -> None:
    rows = (
        (fmt(p.epsilon), fmt(p.gamma), str(int(p.converged)), str(p.iterations)) for p in points
    )
    write_csv(path, CURVE_CSV_HEADER, rows)


def write_trajectory_field_csv(
    field: Sequence[tuple[float, Sequence[tuple[float, float]]]], path: str | Path
) -> None:
    rows = (
        (fmt(eps), str(it), fmt(p0), fmt(p1))
        for eps, pairs in field
        for it, (p0, p1) in enumerate(pairs, start=1)
    )
    write_csv(path, TRAJECTORY_FIELD_CSV_HEADER, rows)
