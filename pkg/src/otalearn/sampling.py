"""Random timed words for sampled agreement checks."""
from __future__ import annotations

import random
from fractions import Fraction

from .automata import OTA, Verdict, run_delay


def random_time(rng: random.Random, kappa: int, den: int = 10) -> Fraction:
    """A delay in [0, kappa+1] that is an integer about a third of the time."""
    top = max(kappa, 1) + 1
    if rng.random() < 0.35:
        return Fraction(rng.randint(0, top))
    return Fraction(rng.randint(0, top * den), den)


def random_delay_word(rng: random.Random, alphabet, kappa: int, max_len: int = 6) -> tuple:
    n = rng.randint(0, max_len)
    return tuple((rng.choice(alphabet), random_time(rng, kappa)) for _ in range(n))


def accepted(A: OTA, word) -> bool:
    return run_delay(A, word)[1] == Verdict.ACCEPT


def sample_disagreements(A: OTA, B: OTA, count: int, seed: int = 0, max_len: int = 6) -> list:
    """Random delay words on which ``A`` and ``B`` disagree."""
    rng = random.Random(seed)
    kappa = max(A.max_constant, B.max_constant)
    out = []
    for _ in range(count):
        w = random_delay_word(rng, tuple(A.alphabet), kappa, max_len)
        if accepted(A, w) != accepted(B, w):
            out.append(w)
    return out
