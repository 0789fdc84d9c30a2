"""Exact density evolution for the fault erasure BP decoder.

The state is a probability triple over the message alphabet {0, 1, e}.
Every stored message (check to variable, variable to check, channel to
variable) passes through the fault channel Q before being consumed, so the
recursion interleaves Q with the erasure-BP check and variable updates.
The modified variable rule (contradictory inputs produce e) is folded into
the closed-form variable update; the enumeration oracles in the test suite
tie the closed forms back to that rule.

Each iteration computes the tentative-correct probability and the variable
messages p from the corrupted check messages and corrupted channel, then
the check messages q from the corrupted p.  The initial all-erasure check
state q_0 = (0,0,1) is a placeholder for flip-flops nothing has written
yet, so the first variable update consumes it as-is; equivalently the
first variable message equals the corrupted channel value.  The fault BP
threshold is a basin-boundary crossing, so this transient detail is load
bearing: corrupting q_0 too would shift the (3,6), alpha=1e-3 threshold
from 0.36207 down to 0.36076.  The channel triple r is constant, so its
corrupted version r' is computed once.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence

from .message_code import FaultParams, MessageCodeSpec, TransitionMatrix, transition_matrix

_SUM_TOL = 1e-12
_NEG_TOL = -1e-14

DEFAULT_MAX_ITERS = 200_000
DEFAULT_FP_TOL = 1e-12


def _clean(value: float, name: str) -> float:
    if value < 0.0:
        if value < _NEG_TOL:
            raise ValueError(f"{name}={value} is negative beyond round-off tolerance")
        return 0.0
    return value


@dataclass(frozen=True)
class MessageDist:
    """Probability triple (p0, p1, pe) over the message alphabet {0, 1, e}.

    Construction clamps round-off negatives in [-1e-14, 0) to zero and
    rejects anything whose total strays from 1 by more than 1e-12.
    """

    p0: float
    p1: float
    pe: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "p0", _clean(self.p0, "p0"))
        object.__setattr__(self, "p1", _clean(self.p1, "p1"))
        object.__setattr__(self, "pe", _clean(self.pe, "pe"))
        total = self.p0 + self.p1 + self.pe
        if abs(total - 1.0) > _SUM_TOL:
            raise ValueError(f"message distribution sums to {total}, not 1")
        for name, v in (("p0", self.p0), ("p1", self.p1), ("pe", self.pe)):
            if v > 1.0 + _SUM_TOL:
                raise ValueError(f"{name}={v} exceeds 1")

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.p0, self.p1, self.pe)


@dataclass(frozen=True)
class EnsembleSpec:
    """(dv, dc)-regular LDPC ensemble; design rate 1 - dv/dc must be in (0, 1)."""

    dv: int
    dc: int

    def __post_init__(self) -> None:
        if self.dv < 2 or self.dc < 2:
            raise ValueError(f"node degrees must be >= 2, got dv={self.dv}, dc={self.dc}")
        rate = 1.0 - self.dv / self.dc
        if not 0.0 < rate < 1.0:
            raise ValueError(f"design rate {rate} outside (0, 1) for dv={self.dv}, dc={self.dc}")

    @property
    def rate(self) -> float:
        return 1.0 - self.dv / self.dc


@dataclass(frozen=True)
class ChannelSpec:
    """Binary erasure channel with erasure probability epsilon."""

    epsilon: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.epsilon <= 1.0:
            raise ValueError(f"erasure probability must lie in [0, 1], got {self.epsilon}")


@dataclass(frozen=True)
class DEConfig:
    max_iters: int = DEFAULT_MAX_ITERS
    fp_tol: float = DEFAULT_FP_TOL
    record_trajectory: bool = False

    def __post_init__(self) -> None:
        if self.max_iters < 1:
            raise ValueError(f"max_iters must be >= 1, got {self.max_iters}")
        if not self.fp_tol > 0.0:
            raise ValueError(f"fp_tol must be positive, got {self.fp_tol}")


class TrajectoryRow(NamedTuple):
    iteration: int
    p: MessageDist
    q: MessageDist
    s0: float


@dataclass(frozen=True)
class DEResult:
    """Converged (or capped) DE state and the error probability gamma = 1 - s0."""

    gamma: float
    iterations: int
    converged: bool
    final_p: MessageDist
    final_q: MessageDist
    trajectory: Optional[tuple[TrajectoryRow, ...]] = None

    def to_json_dict(self) -> dict:
        d = {
            "gamma": self.gamma,
            "iterations": self.iterations,
            "converged": self.converged,
            "p": list(self.final_p.as_tuple()),
            "q": list(self.final_q.as_tuple()),
        }
        if self.trajectory is not None:
            d["trajectory"] = [
                [row.iteration, *row.p.as_tuple(), *row.q.as_tuple(), row.s0]
                for row in self.trajectory
            ]
        return d


TRAJECTORY_CSV_HEADER = ("iter", "p0", "p1", "pe", "q0", "q1", "qe", "s0")


def write_de_trajectory_csv(result: DEResult, path) -> None:
    """Export a recorded trajectory with header iter,p0,p1,pe,q0,q1,qe,s0."""
    from .serialization import fmt, write_csv

    if result.trajectory is None:
        raise ValueError("result carries no trajectory; run with record_trajectory=True")
    rows = (
        (str(row.iteration), *(fmt(v) for v in (*row.p.as_tuple(), *row.q.as_tuple(), row.s0)))
        for row in result.trajectory
    )
    write_csv(path, TRAJECTORY_CSV_HEADER, rows)


def _apply_rows(
    rows: Sequence[Sequence[float]], t0: float, t1: float, te: float
) -> tuple[float, float, float]:
    r0, r1, re_ = rows
    return (
        r0[0] * t0 + r1[0] * t1 + re_[0] * te,
        r0[1] * t0 + r1[1] * t1 + re_[1] * te,
        r0[2] * t0 + r1[2] * t1 + re_[2] * te,
    )


def _finalize3(p0: float, p1: float, pe: float) -> tuple[float, float, float]:
    # Clamp round-off negatives; renormalize only if the sum has actually
    # drifted, so bit-reproducibility is preserved on the common path.
    p0 = _clean(p0, "p0")
    p1 = _clean(p1, "p1")
    pe = _clean(pe, "pe")
    total = p0 + p1 + pe
    if abs(total - 1.0) > _SUM_TOL:
        p0, p1, pe = p0 / total, p1 / total, pe / total
    return p0, p1, pe


def apply_intermediate(t: MessageDist, q: TransitionMatrix) -> MessageDist:
    """Push a message distribution through the fault channel: t'(y) = sum_x Q(y|x) t(x)."""
    return MessageDist(*_apply_rows(q.q, t.p0, t.p1, t.pe))


def channel_dist(ch: ChannelSpec) -> MessageDist:
    """Distribution of the message a received-symbol node emits: (1-eps, 0, eps)."""
    return MessageDist(1.0 - ch.epsilon, 0.0, ch.epsilon)


def _check3(pp0: float, pp1: float, ppe: float, dc: int) -> tuple[float, float, float]:
    s = pp0 + pp1
    d = pp0 - pp1
    e = dc - 1
    q0 = (s**e + d**e) / 2.0
    q1 = (s**e - d**e) / 2.0
    return _finalize3(q0, q1, 1.0 - q0 - q1)


def check_update(p_prime: MessageDist, dc: int) -> MessageDist:
    """Check-node output distribution from dc-1 independent corrupted inputs.

    The output is 0 (resp. 1) when the inputs carry no erasure and an even
    (resp. odd) number of ones; any erasure erases the output.
    """
    if dc < 2:
        raise ValueError(f"check degree must be >= 2, got {dc}")
    return MessageDist(*_check3(p_prime.p0, p_prime.p1, p_prime.pe, dc))


def _variable3(
    qp0: float, qp1: float, qpe: float, rp0: float, rp1: float, rpe: float, dv: int
) -> tuple[float, float, float]:
    a = dv - 1
    no_one = (1.0 - qp1) ** a
    no_zero = (1.0 - qp0) ** a
    all_e = qpe**a
    p0 = rp0 * no_one + rpe * (no_one - all_e)
    p1 = rp1 * no_zero + rpe * (no_zero - all_e)
    return _finalize3(p0, p1, 1.0 - p0 - p1)


def variable_update(q_prime: MessageDist, r_prime: MessageDist, dv: int) -> MessageDist:
    """Variable-node output distribution from dv-1 corrupted check inputs plus the channel.

    Sends 0 when the inputs contain a 0 and no 1 (contradictions map to e),
    so p(0) = r'(0)(1-q'(1))^(dv-1) + r'(e)[(1-q'(1))^(dv-1) - q'(e)^(dv-1)],
    and symmetrically for p(1).
    """
    if dv < 2:
        raise ValueError(f"variable degree must be >= 2, got {dv}")
    return MessageDist(
        *_variable3(
            q_prime.p0, q_prime.p1, q_prime.pe, r_prime.p0, r_prime.p1, r_prime.pe, dv
        )
    )


def _tentative(
    qp0: float, qp1: float, qpe: float, rp0: float, rp1: float, rpe: float, dv: int
) -> float:
    no_one = (1.0 - qp1) ** dv
    return rp0 * no_one + rpe * (no_one - qpe**dv)


def tentative_correct_prob(q_prime: MessageDist, r_prime: MessageDist, dv: int) -> float:
    """Probability the tentative estimate equals the transmitted 0.

    Same event structure as the variable update but over all dv check
    inputs, hence exponent dv rather than dv-1.
    """
    return _tentative(
        q_prime.p0, q_prime.p1, q_prime.pe, r_prime.p0, r_prime.p1, r_prime.pe, dv
    )


def run_de(
    ens: EnsembleSpec,
    ch: ChannelSpec,
    spec: MessageCodeSpec,
    fp: FaultParams,
    cfg: Optional[DEConfig] = None,
) -> DEResult:
    """Iterate the fault DE recursion to a fixed point or the iteration cap.

    Stops when the max-norm change of p between consecutive iterations
    falls below cfg.fp_tol; hitting cfg.max_iters first reports
    converged=False with the last state (the caller decides what to do).
    Trajectory recording stores one row per iteration, so keep max_iters
    modest when it is enabled.
    """
    if cfg is None:
        cfg = DEConfig()
    qmat = transition_matrix(spec, fp).q
    dv, dc = ens.dv, ens.dc
    rp0, rp1, rpe = _apply_rows(qmat, 1.0 - ch.epsilon, 0.0, ch.epsilon)

    # corrupted check messages as the variable nodes will consume them;
    # the initial placeholder is consumed uncorrupted (see module docstring)
    qp0, qp1, qpe = 0.0, 0.0, 1.0
    q0, q1, qe = 0.0, 0.0, 1.0
    prev_p: Optional[tuple[float, float, float]] = None
    traj: Optional[list[TrajectoryRow]] = [] if cfg.record_trajectory else None
    s0 = 0.0
    converged = False
    iterations = 0

    for step in range(1, cfg.max_iters + 1):
        iterations = step
        s0 = _tentative(qp0, qp1, qpe, rp0, rp1, rpe, dv)
        p0, p1, pe = _variable3(qp0, qp1, qpe, rp0, rp1, rpe, dv)
        pp0, pp1, ppe = _apply_rows(qmat, p0, p1, pe)
        q0, q1, qe = _check3(pp0, pp1, ppe, dc)
        qp0, qp1, qpe = _apply_rows(qmat, q0, q1, qe)
        if traj is not None:
            traj.append(TrajectoryRow(step, MessageDist(p0, p1, pe), MessageDist(q0, q1, qe), s0))
        if prev_p is not None and (
            max(abs(p0 - prev_p[0]), abs(p1 - prev_p[1]), abs(pe - prev_p[2])) < cfg.fp_tol
        ):
            prev_p = (p0, p1, pe)
            converged = True
            break
        prev_p = (p0, p1, pe)

    gamma = 1.0 - s0
    if gamma < 0.0:
        if gamma < -_SUM_TOL:
            raise ValueError(f"tentative-correct probability {s0} exceeds 1")
        gamma = 0.0
    return DEResult(
        gamma=gamma,
        iterations=iterations,
        converged=converged,
        final_p=MessageDist(*prev_p),
        final_q=MessageDist(q0, q1, qe),
        trajectory=tuple(traj) if traj is not None else None,
    )
