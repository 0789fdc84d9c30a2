"""Ternary message protection code and its exact symbol-level fault channel.

BP messages over the alphabet {0, 1, e} are stored in flip-flops as binary
words of even length n.  Each stored bit flips independently with
probability alpha, so the encode -> flip -> decode pipeline acts on a
message symbol as a 3x3 row-stochastic channel.  This module constructs
that channel in closed form (binomial tail sums plus an exact two-binomial
convolution for the erasure codeword) and also provides the exhaustive
2^n enumeration used as a test oracle.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from enum import IntEnum
from typing import Sequence

_ROW_SUM_TOL = 1e-12


class MessageSymbol(IntEnum):
    """Ternary BP message alphabet, with fixed order ZERO < ONE < ERASURE."""

    ZERO = 0
    ONE = 1
    ERASURE = 2


SYMBOL_CHARS = {MessageSymbol.ZERO: "0", MessageSymbol.ONE: "1", MessageSymbol.ERASURE: "e"}


@dataclass(frozen=True)
class MessageCodeSpec:
    """Parameters (n, k) of the message protection code.

    n is the binary code length (even, >= 2; the erasure codeword is n/2
    zeros followed by n/2 ones) and k the decision radius: read-out words
    of weight <= k-1 decode to 0, weight >= n-k+1 to 1, anything else to e.
    """

    n: int
    k: int

    def __post_init__(self) -> None:
        if self.n < 2 or self.n % 2 != 0:
            raise ValueError(f"message code length n must be even and >= 2, got {self.n}")
        if not 1 <= self.k <= self.n // 2:
            raise ValueError(
                f"decision radius k must satisfy 1 <= k <= n/2, got k={self.k} for n={self.n}"
            )


@dataclass(frozen=True)
class FaultParams:
    """Per-bit transient flip probability of a stored binary symbol."""

    alpha: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.alpha < 1.0:
            raise ValueError(f"flip probability alpha must lie in [0, 1), got {self.alpha}")


@dataclass(frozen=True)
class TransitionMatrix:
    """Symbol channel q[x][x_hat]: probability that input x is read back as x_hat.

    Rows and columns are indexed ZERO, ONE, ERASURE.  Rows are stochastic
    and the matrix is symmetric under relabeling 0 <-> 1 (exactly, by
    construction).
    """

    q: tuple[tuple[float, float, float], ...]
    n: int
    k: int
    alpha: float

    def __post_init__(self) -> None:
        if len(self.q) != 3 or any(len(row) != 3 for row in self.q):
            raise ValueError("transition matrix must be 3x3")
        for row in self.q:
            for v in row:
                if not 0.0 <= v <= 1.0:
                    raise ValueError(f"transition probability {v} outside [0, 1]")
            if abs(math.fsum(row) - 1.0) > _ROW_SUM_TOL:
                raise ValueError(f"transition matrix row {row} does not sum to 1")
        q = self.q
        if not (
            q[0][0] == q[1][1]
            and q[0][1] == q[1][0]
            and q[0][2] == q[1][2]
            and q[2][0] == q[2][1]
        ):
            raise ValueError("transition matrix violates 0<->1 relabeling symmetry")

    def prob(self, out_sym: MessageSymbol, in_sym: MessageSymbol) -> float:
        return self.q[int(in_sym)][int(out_sym)]

    def row(self, in_sym: MessageSymbol) -> tuple[float, float, float]:
        return self.q[int(in_sym)]

    def to_json_dict(self) -> dict:
        return {"n": self.n, "k": self.k, "alpha": self.alpha, "Q": [list(r) for r in self.q]}


def transition_matrix_from_json_dict(d: dict) -> TransitionMatrix:
    rows = tuple(tuple(float(v) for v in row) for row in d["Q"])
    return TransitionMatrix(q=rows, n=int(d["n"]), k=int(d["k"]), alpha=float(d["alpha"]))


def encode(x: MessageSymbol, spec: MessageCodeSpec) -> tuple[int, ...]:
    """Map a message symbol to its length-n codeword."""
    half = spec.n // 2
    if x == MessageSymbol.ZERO:
        return (0,) * spec.n
    if x == MessageSymbol.ONE:
        return (1,) * spec.n
    return (0,) * half + (1,) * half


def decode(y: Sequence[int], spec: MessageCodeSpec) -> MessageSymbol:
    """Map a read-out word back to a message symbol by its Hamming weight."""
    if len(y) != spec.n:
        raise ValueError(f"read-out word has length {len(y)}, expected {spec.n}")
    w = sum(y)
    if w <= spec.k - 1:
        return MessageSymbol.ZERO
    if w >= spec.n - spec.k + 1:
        return MessageSymbol.ONE
    return MessageSymbol.ERASURE


def fault_pattern_prob(m_out: Sequence[int], m_in: Sequence[int], alpha: float) -> float:
    """Probability of reading m_out given m_in was stored, under independent bit flips."""
    if len(m_out) != len(m_in):
        raise ValueError(f"pattern lengths differ: {len(m_out)} vs {len(m_in)}")
    d = sum(a != b for a, b in zip(m_out, m_in))
    return (1.0 - alpha) ** (len(m_in) - d) * alpha**d


def _binom_pmf(n: int, p: float) -> list[float]:
    # comb() keeps the coefficient in exact integer arithmetic before the
    # float conversion, which matters for tiny p at larger n.
    q = 1.0 - p
    return [math.comb(n, j) * p**j * q ** (n - j) for j in range(n + 1)]


def transition_matrix(spec: MessageCodeSpec, fp: FaultParams) -> TransitionMatrix:
    """Exact symbol channel of the encode -> per-bit flip -> decode pipeline.

    For input 0 the read-out weight is Binomial(n, alpha); for input e it is
    n/2 + B1 - B2 with B1, B2 independent Binomial(n/2, alpha), evaluated by
    exact convolution.  Closed form; no pattern enumeration.
    """
    n, k, a = spec.n, spec.k, fp.alpha
    pmf = _binom_pmf(n, a)
    z_to_z = math.fsum(pmf[:k])
    z_to_o = math.fsum(pmf[n - k + 1 :])
    z_to_e = math.fsum(pmf[k : n - k + 1])

    half = _binom_pmf(n // 2, a)
    h = n // 2
    # weight pmf of the corrupted erasure codeword: index m = h + (B1 - B2)
    w_pmf = []
    for m in range(n + 1):
        lo = max(0, m - h)
        hi = min(h, m)
        w_pmf.append(math.fsum(half[j] * half[h - m + j] for j in range(lo, hi + 1)))
    e_to_z = math.fsum(w_pmf[:k])
    e_to_e = math.fsum(w_pmf[k : n - k + 1])

    rows = (
        (z_to_z, z_to_o, z_to_e),
        (z_to_o, z_to_z, z_to_e),
        (e_to_z, e_to_z, e_to_e),
    )
    return TransitionMatrix(q=rows, n=n, k=k, alpha=a)


def transition_matrix_bruteforce(
    spec: MessageCodeSpec, fp: FaultParams
) -> tuple[tuple[float, float, float], ...]:
    """Oracle: accumulate fault_pattern_prob over every 2^n read-out pattern.

    Returns raw rows (not a TransitionMatrix) so that floating-point
    summation order is not massaged into the exact symmetries the closed
    form enforces.  Exponential in n; intended for n <= 12.
    """
    rows = []
    for x in MessageSymbol:
        sent = encode(x, spec)
        acc = [0.0, 0.0, 0.0]
        for y in itertools.product((0, 1), repeat=spec.n):
            acc[int(decode(y, spec))] += fault_pattern_prob(y, sent, fp.alpha)
        rows.append((acc[0], acc[1], acc[2]))
    return tuple(rows)


def bits_to_str(bits: Sequence[int]) -> str:
    """Render a bit sequence as an ASCII string of '0'/'1'."""
    return "".join("01"[b] for b in bits)


def bits_from_str(s: str) -> tuple[int, ...]:
    if any(c not in "01" for c in s):
        raise ValueError(f"bit string may contain only '0' and '1', got {s!r}")
    return tuple(int(c) for c in s)
