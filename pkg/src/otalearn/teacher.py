"""The teacher: membership by simulation, equivalence by region-graph search."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from .automata import OTA, Verdict, complete, run_delay, run_logical, validate, without_sink
from .equivalence import find_witness


@dataclass(frozen=True)
class EquivResult:
    equivalent: bool
    word: tuple = ()  # reset-delay word (smart) or delay word (normal)
    sign: Optional[str] = None

    @classmethod
    def yes(cls) -> "EquivResult":
        return cls(True)


class Oracle:
    """Answers queries about a fixed target automaton and counts them.

    With the accelerating trick on, the target is used without its sink so
    that words leaving the original automaton are reported as ``x``.
    """

    def __init__(self, target: OTA, mode: str = "smart", trick: bool = True):
        if mode not in ("smart", "normal"):
            raise ValueError(f"unknown mode {mode!r}")
        if not validate(target).deterministic:
            raise ValueError("the target must be deterministic")
        self.mode = mode
        self.trick = trick
        self.target = without_sink(target) if trick else complete(target)
        self.membership_count = 0
        self.equivalence_count = 0

    @property
    def alphabet(self):
        return self.target.alphabet

    def membership_smart(self, gamma) -> tuple:
        self.membership_count += 1
        return run_logical(self.target, tuple(gamma), self.trick)

    def membership_normal(self, omega) -> Verdict:
        self.membership_count += 1
        return run_delay(self.target, tuple(omega), self.trick)[1]

    def equivalence(self, H: OTA) -> EquivResult:
        self.equivalence_count += 1
        w = find_witness(H, self.target)
        if w is None:
            return EquivResult.yes()
        if self.mode == "smart":
            annotated, _ = run_delay(self.target, w.word, self.trick)
            return EquivResult(False, annotated, w.sign)
        return EquivResult(False, w.word, w.sign)

    def stats(self) -> dict:
        return {"membership_count": self.membership_count, "equivalence_count": self.equivalence_count}


class ScriptedOracle(Oracle):
    """Live membership answers, but equivalence replies come from a fixed list.

    Once the script runs out the hypothesis is declared equivalent.
    """

    def __init__(self, target: OTA, script: Iterable, mode: str = "smart", trick: bool = False):
        super().__init__(target, mode, trick)
        self.script = list(script)
        self.submitted = []

    def equivalence(self, H: OTA) -> EquivResult:
        self.equivalence_count += 1
        self.submitted.append(H)
        if not self.script:
            return EquivResult.yes()
        word, sign = self.script.pop(0)
        return EquivResult(False, tuple(word), sign)
