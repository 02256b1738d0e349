"""Desk-scale study of the gap between query-bounded and exhaustive
adversaries in a tampering game, built from one-time signatures, an error
correcting code, and a CNF compiler for "exists an adversarial example".
"""

from .bitstring import BitString, concat_all, hamming_distance
from .game import (STAR, Counters, GameOutcome, Hypothesis, Problem, Reason,
                   RiskEstimate, estimate_adv_risk, estimate_risk, mix_seed,
                   play_game, winning)

__all__ = [
    "BitString", "concat_all", "hamming_distance",
    "STAR", "Counters", "GameOutcome", "Hypothesis", "Problem", "Reason",
    "RiskEstimate", "estimate_adv_risk", "estimate_risk", "mix_seed",
    "play_game", "winning",
]

__version__ = "0.1.0"
