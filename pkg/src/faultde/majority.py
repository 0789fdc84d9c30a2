"""Two-decoder majority voting: the ternary vote and its error lower bound.

Running two identical fault decoders and voting cannot be analyzed exactly
without the joint output distribution; under the natural positive-
correlation assumption (joint correct probability at least the squared
single-decoder value) the combined error probability is bounded below by
the square of the single-decoder error probability.
"""

from __future__ import annotations

from dataclasses import dataclass

from .density_evolution import DEResult
from .message_code import MessageSymbol

CORRELATION_ASSUMPTION = "joint correct probability >= squared single-decoder correct probability"

_VOTE = {
    (0, 0): 0,
    (0, 2): 0,
    (2, 0): 0,
    (0, 1): 2,
    (1, 0): 2,
    (2, 2): 2,
    (1, 1): 1,
    (1, 2): 1,
    (2, 1): 1,
}


def majority_vote(x1: MessageSymbol, x2: MessageSymbol) -> MessageSymbol:
    """Ternary vote: agreeing or half-erased pairs resolve, contradictions erase."""
    return MessageSymbol(_VOTE[(int(x1), int(x2))])


@dataclass(frozen=True)
class MajorityBoundResult:
    """Lower bound (1 - s0)^2 on the voted error probability.

    provisional marks bounds derived from an unconverged DE run; assumption
    records the correlation hypothesis the bound rests on.
    """

    s0: float
    lower_bound: float
    provisional: bool
    assumption: str = CORRELATION_ASSUMPTION

    def to_json_dict(self) -> dict:
        return {
            "s0": self.s0,
            "lower_bound": self.lower_bound,
            "provisional": self.provisional,
            "assumption": self.assumption,
        }


def bound_for_gamma(gamma: float) -> float:
    """(1 - s0)^2 evaluated through s0 = 1 - gamma, as the result stores it."""
    s0 = 1.0 - gamma
    return (1.0 - s0) ** 2


def majority_lower_bound(de_result: DEResult) -> MajorityBoundResult:
    """Bound the two-decoder voted error probability from a single-decoder DE run."""
    return MajorityBoundResult(
        s0=1.0 - de_result.gamma,
        lower_bound=bound_for_gamma(de_result.gamma),
        provisional=not de_result.converged,
    )
