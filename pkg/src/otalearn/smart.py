"""Learning with a teacher that reveals clock resets."""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable, Optional

from .automata import OTA, complete, live_location_count, normalize, project, to_logical, validate
from .hypothesis import hypothesis_from_table
from .table import ObservationTable, fill, initial_table, process_counterexample, repair


class LearningStalled(RuntimeError):
    """A counterexample brought no new information into the table."""


class BoundExceeded(AssertionError):
    pass


@dataclass
class LearnResult:
    hypothesis: OTA
    stats: dict = field(default_factory=dict)
    table: Optional[ObservationTable] = None


def symbolic_state_bound(target: OTA) -> int:
    """|Q| * (2k + 2) for the completed target."""
    C = complete(target)
    return len(C.locations) * (2 * validate(C).max_constant + 2)


def learned_stats(H: OTA, T: ObservationTable, oracle, mode: str, started: float) -> dict:
    s = {"mode": mode}
    s.update(oracle.stats())
    s.update(
        locations_learned=len(H.locations),
        locations_non_sink=live_location_count(H),
        table_rows=len(T.S) + len(T.R),
        table_columns=len(T.E),
        wall_time_ms=round((time.perf_counter() - started) * 1000, 3),
    )
    return s


def counterexample_suffixes(T: ObservationTable, ctx_word) -> list:
    """Logical suffixes of a normalized counterexample, shortest first."""
    g = project(normalize(to_logical(ctx_word)))
    return [g[i:] for i in range(len(g) - 1, 0, -1)]


def learn_smart(
    oracle,
    alphabet=None,
    evidence: bool = True,
    max_rounds: int = 100_000,
    on_snapshot: Optional[Callable[[str, ObservationTable], None]] = None,
    state_bound: Optional[int] = None,
) -> LearnResult:
    """Learn the oracle's target language.

    ``on_snapshot(event, table)`` sees the table after initialisation, every
    repair and every counterexample.  ``state_bound`` (defaults to the
    symbolic-state count of the oracle's target when it exposes one) is
    checked against |S| throughout.
    """
    started = time.perf_counter()
    alphabet = tuple(alphabet or oracle.alphabet)
    if state_bound is None and getattr(oracle, "target", None) is not None:
        state_bound = symbolic_state_bound(oracle.target)
    cache: dict = {}

    def member(gamma):
        hit = cache.get(gamma)
        if hit is None:
            hit = cache[gamma] = oracle.membership_smart(gamma)
        return hit

    def snap(event, T):
        if state_bound is not None and len(T.S) > state_bound:
            raise BoundExceeded(f"|S| = {len(T.S)} exceeds {state_bound}")
        if on_snapshot:
            on_snapshot(event, T)

    T = initial_table(alphabet, member)
    snap("init", T)
    for _ in range(max_rounds):
        repair(T, member, evidence, on_step=snap)
        H = hypothesis_from_table(T, evidence)
        res = oracle.equivalence(H)
        if res.equivalent:
            return LearnResult(H, learned_stats(H, T, oracle, "smart", started), T)
        before = len(T.R)
        process_counterexample(T, res.word, member)
        if len(T.R) == before:
            # every prefix is already known; fall back to adding its suffixes
            added = [e for e in counterexample_suffixes(T, res.word) if T.add_suffix(e)]
            if not added:
                raise LearningStalled(f"counterexample {res.word} adds nothing")
            fill(T, member)
        snap("counterexample", T)
    raise LearningStalled(f"no result after {max_rounds} rounds")
