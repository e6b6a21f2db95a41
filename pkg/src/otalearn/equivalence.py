"""Timed-language equivalence of two one-clock automata with witness words."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .automata import OTA, Verdict, complete, run_delay, validate
from .regions import (
    STATUS_CAP,
    STATUS_EQUIVALENT,
    encode,
    product_search,
    region_code,
    state_bound,
    time_successor,
)


class InternalError(AssertionError):
    pass


@dataclass(frozen=True)
class Witness:
    word: tuple  # delay word
    sign: str  # "-" if the first automaton accepts and the second rejects, "+" otherwise


def _frac(v: Fraction) -> Fraction:
    return v - math.floor(v)


def _step_delay(x: Fraction, y: Fraction, kx: int, ky: int) -> Fraction:
    """Delay that moves the pair of clocks into its next region."""
    bounded = [v for v, k in ((x, kx), (y, ky)) if v <= k]
    if not bounded:
        raise InternalError("no time successor beyond both constants")
    dist = [1 - _frac(v) for v in bounded]  # a clock on an integer is 1 away from the next one
    if any(_frac(v) == 0 for v in bounded):
        return min(dist) / 2
    return min(dist)


def concretize(H: OTA, A: OTA, kx: int, ky: int, actions: Sequence[str], steps: Sequence[int]) -> tuple:
    """Turn a symbolic product path into a delay word, replaying it to check each region."""
    qh, qa = H.initial, A.initial
    x = y = Fraction(0)
    rx = ry = o = 0
    topx, topy = 2 * kx + 1, 2 * ky + 1
    word = []
    for a, j in zip(actions, steps):
        delay = Fraction(0)
        for _ in range(j):
            d = _step_delay(x, y, kx, ky)
            x += d
            y += d
            delay += d
            rx, ry, o, moved = time_successor(rx, ry, o, topx, topy)
            if not moved:
                raise InternalError("path asks for time beyond the last region")
            got_o = 0
            if rx % 2 == 1 and rx < topx and ry % 2 == 1 and ry < topy:
                fx, fy = _frac(x), _frac(y)
                got_o = (fx > fy) - (fx < fy)
            if (region_code(x, kx), region_code(y, ky), got_o) != (int(rx), int(ry), int(o)):
                raise InternalError("replay left the symbolic path")
        th = H.enabled(qh, a, x)
        ta = A.enabled(qa, a, y)
        if th is None or ta is None:
            raise InternalError("replay hit an incomplete location")
        if th.reset:
            x, rx, o = Fraction(0), 0, 0
        if ta.reset:
            y, ry, o = Fraction(0), 0, 0
        qh, qa = th.target, ta.target
        word.append((a, delay))
    return tuple(word)


def find_witness(H: OTA, A: OTA, cap: Optional[int] = None) -> Optional[Witness]:
    """Shortest word on which the two automata disagree, or None if their languages are equal.

    Missing transitions are treated as rejecting (both automata are completed first).
    """
    if set(H.alphabet) != set(A.alphabet):
        raise ValueError("automata over different alphabets")
    alphabet = tuple(A.alphabet)
    Hc, Ac = complete(H), complete(A)
    kx, ky = validate(Hc).max_constant, validate(Ac).max_constant
    th, rh, ah, qh = encode(Hc, alphabet, kx)
    ta, ra, aa, qa = encode(Ac, alphabet, ky)
    bound = state_bound(len(Hc.locations), len(Ac.locations), kx, ky)
    status, sign, acts, steps = product_search(th, rh, ah, qh, ta, ra, aa, qa, kx, ky, cap or bound)
    if status == STATUS_EQUIVALENT:
        return None
    if status == STATUS_CAP:
        raise InternalError("region graph exceeded its size bound")
    word = concretize(Hc, Ac, kx, ky, [alphabet[i] for i in acts], [int(j) for j in steps])
    _, vh = run_delay(Hc, word)
    _, va = run_delay(Ac, word)
    expect = "-" if sign < 0 else "+"
    if (vh == Verdict.ACCEPT) == (va == Verdict.ACCEPT) or (vh == Verdict.ACCEPT) != (expect == "-"):
        raise InternalError(f"witness {word} does not separate the automata")
    return Witness(word, expect)


def equivalent(H: OTA, A: OTA) -> bool:
    return find_witness(H, A) is None
